#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "devil/core/binary_io.hpp"
#include "devil/core/error.hpp"
#include "devil/core/types.hpp"

namespace devil::io {

namespace detail {

/// Splits text into lines, dropping a UTF-8 BOM and trailing CR.
inline std::vector<std::string> split_lines(std::string text) {
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

inline bool is_blank(std::string_view s) { return s.find_first_not_of(" \t") == std::string_view::npos; }

inline std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto& c : cells) {
    const auto b = c.find_first_not_of(" \t");
    const auto e = c.find_last_not_of(" \t");
    c = b == std::string::npos ? std::string{} : c.substr(b, e - b + 1);
  }
  return cells;
}

inline std::string where(const std::filesystem::path& path, std::size_t line_no) {
  return path.string() + ":" + std::to_string(line_no);
}

inline long parse_int(const std::string& cell, const std::string& ctx) {
  long v = 0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw Error(ErrorKind::Validation, ctx + ": not an integer: '" + cell + "'");
  return v;
}

inline int parse_grade(const std::string& cell, const std::string& ctx) {
  const long g = parse_int(cell, ctx);
  if (!is_valid_grade(g)) {
    throw Error(ErrorKind::Validation, ctx + ": grade " + std::to_string(g) + " outside 1..5");
  }
  return static_cast<int>(g);
}

inline std::optional<double> parse_unit_interval(const std::string& cell, const std::string& ctx) {
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw Error(ErrorKind::Validation, ctx + ": not a number: '" + cell + "'");
  if (!std::isfinite(v)) throw Error(ErrorKind::Validation, ctx + ": non-finite value");
  if (v < 0.0 || v > 1.0) throw Error(ErrorKind::Validation, ctx + ": value " + cell + " outside [0,1]");
  return v;
}

inline void expect_header(const std::vector<std::string>& lines, std::string_view header,
                          const std::filesystem::path& path) {
  if (lines.empty() || lines.front() != header) {
    throw Error(ErrorKind::Format, path.string() + ": expected header '" + std::string(header) + "'");
  }
}

inline std::string format_double(double v) {
  // Shortest round-trip representation, same as the JSON emitter.
  nlohmann::json j = v;
  return j.dump();
}

}  // namespace detail

inline constexpr std::string_view kQualityHeader =
    "video_id,naturalness,motion_smoothness,subject_consistency,background_consistency";
inline constexpr std::string_view kRatingsHeader =
    "video_id,frame_grade,segment_grade,video_grade,naturalness_grade";

/// JSONL benchmark, one {"id","prompt","grade"} object per non-empty line.
[[nodiscard]] inline std::vector<BenchmarkEntry> parse_benchmark(const std::string& text,
                                                                 const std::filesystem::path& path = "<benchmark>") {
  std::vector<BenchmarkEntry> out;
  std::unordered_set<std::string> seen;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    const auto ctx = detail::where(path, i + 1);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::Format, ctx + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("prompt") || !j.contains("grade") ||
        !j["id"].is_string() || !j["prompt"].is_string() || !j["grade"].is_number_integer()) {
      throw Error(ErrorKind::Format, ctx + ": expected string id, string prompt, integer grade");
    }
    BenchmarkEntry e{j["id"].get<std::string>(), j["prompt"].get<std::string>(), 0};
    const auto g = j["grade"].get<long>();
    if (!is_valid_grade(g)) {
      throw Error(ErrorKind::Validation, ctx + ": grade " + std::to_string(g) + " outside 1..5");
    }
    e.grade = static_cast<int>(g);
    if (!seen.insert(e.id).second) throw Error(ErrorKind::Validation, ctx + ": duplicate id '" + e.id + "'");
    out.push_back(std::move(e));
  }
  return out;
}

[[nodiscard]] inline std::vector<BenchmarkEntry> load_benchmark(const std::filesystem::path& path) {
  return parse_benchmark(read_file_text(path), path);
}

[[nodiscard]] inline std::string format_benchmark(const std::vector<BenchmarkEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    nlohmann::ordered_json j;
    j["id"] = e.id;
    j["prompt"] = e.prompt;
    j["grade"] = e.grade;
    out += j.dump() + "\n";
  }
  return out;
}

[[nodiscard]] inline std::map<std::string, QualityRecord> parse_quality(const std::string& text,
                                                                       const std::filesystem::path& path = "<quality>") {
  const auto lines = detail::split_lines(text);
  detail::expect_header(lines, kQualityHeader, path);
  std::map<std::string, QualityRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    const auto ctx = detail::where(path, i + 1);
    const auto cells = detail::split_csv(lines[i]);
    if (cells.size() != 5) throw Error(ErrorKind::Format, ctx + ": expected 5 columns");
    if (cells[0].empty()) throw Error(ErrorKind::Validation, ctx + ": empty video_id");
    QualityRecord rec;
    rec.video_id = cells[0];
    for (std::size_t m = 0; m < kAllQualityMetrics.size(); ++m) {
      rec.get(kAllQualityMetrics[m]) =
          detail::parse_unit_interval(cells[m + 1], ctx + " " + std::string(to_string(kAllQualityMetrics[m])));
    }
    if (!out.emplace(rec.video_id, rec).second) {
      throw Error(ErrorKind::Validation, ctx + ": duplicate video_id '" + rec.video_id + "'");
    }
  }
  return out;
}

[[nodiscard]] inline std::map<std::string, QualityRecord> load_quality(const std::filesystem::path& path) {
  return parse_quality(read_file_text(path), path);
}

[[nodiscard]] inline std::string format_quality(const std::map<std::string, QualityRecord>& table) {
  std::string out(kQualityHeader);
  out += "\n";
  for (const auto& [id, rec] : table) {
    out += id;
    for (auto m : kAllQualityMetrics) {
      out += ",";
      if (const auto& v = rec.get(m)) out += detail::format_double(*v);
    }
    out += "\n";
  }
  return out;
}

[[nodiscard]] inline std::map<std::string, RatingsRecord> parse_ratings(const std::string& text,
                                                                       const std::filesystem::path& path = "<ratings>") {
  const auto lines = detail::split_lines(text);
  detail::expect_header(lines, kRatingsHeader, path);
  std::map<std::string, RatingsRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    const auto ctx = detail::where(path, i + 1);
    const auto cells = detail::split_csv(lines[i]);
    if (cells.size() != 5) throw Error(ErrorKind::Format, ctx + ": expected 5 columns");
    if (cells[0].empty()) throw Error(ErrorKind::Validation, ctx + ": empty video_id");
    RatingsRecord rec{cells[0], detail::parse_grade(cells[1], ctx), detail::parse_grade(cells[2], ctx),
                      detail::parse_grade(cells[3], ctx), detail::parse_grade(cells[4], ctx)};
    if (!out.emplace(rec.video_id, rec).second) {
      throw Error(ErrorKind::Validation, ctx + ": duplicate video_id '" + rec.video_id + "'");
    }
  }
  return out;
}

[[nodiscard]] inline std::map<std::string, RatingsRecord> load_ratings(const std::filesystem::path& path) {
  return parse_ratings(read_file_text(path), path);
}

[[nodiscard]] inline std::string format_ratings(const std::map<std::string, RatingsRecord>& table) {
  std::string out(kRatingsHeader);
  out += "\n";
  for (const auto& [id, r] : table) {
    out += id + "," + std::to_string(r.frame_grade) + "," + std::to_string(r.segment_grade) + "," +
           std::to_string(r.video_grade) + "," + std::to_string(r.naturalness_grade) + "\n";
  }
  return out;
}

}  // namespace devil::io
