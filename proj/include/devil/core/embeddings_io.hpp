#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "devil/core/binary_io.hpp"
#include "devil/core/error.hpp"
#include "devil/core/types.hpp"

namespace devil::io {

// DEVB layout: "DEVB", u32 version=1, u32 section_count, then per section:
//   u8 tag, u32 rank, rank x u32 dims, f32 data (row-major). All little-endian.
// Sections are written in tag order, which makes the encoding canonical.
inline constexpr std::string_view kDevbMagic = "DEVB";
inline constexpr std::uint32_t kDevbVersion = 1;

namespace detail {

inline std::optional<Tensor>& section_slot(EmbeddingBundle& b, std::uint8_t tag) {
  switch (tag) {
    case static_cast<std::uint8_t>(SectionTag::FrameEmbeddings): return b.frame_embeddings;
    case static_cast<std::uint8_t>(SectionTag::PatchMaps): return b.patch_maps;
    case static_cast<std::uint8_t>(SectionTag::SegmentEmbeddings): return b.segment_embeddings;
    case static_cast<std::uint8_t>(SectionTag::FlowFields): return b.flow_fields;
    default: throw Error(ErrorKind::Format, "unknown DEVB section tag " + std::to_string(tag));
  }
}

}  // namespace detail

[[nodiscard]] inline std::vector<std::uint8_t> encode_devb(const EmbeddingBundle& bundle) {
  bundle.validate();
  const std::pair<SectionTag, const std::optional<Tensor>*> sections[] = {
      {SectionTag::FrameEmbeddings, &bundle.frame_embeddings},
      {SectionTag::PatchMaps, &bundle.patch_maps},
      {SectionTag::SegmentEmbeddings, &bundle.segment_embeddings},
      {SectionTag::FlowFields, &bundle.flow_fields},
  };
  ByteWriter w;
  w.magic(kDevbMagic);
  w.u32(kDevbVersion);
  std::uint32_t count = 0;
  for (const auto& [tag, t] : sections) count += t->has_value() ? 1 : 0;
  w.u32(count);
  for (const auto& [tag, t] : sections) {
    if (!t->has_value()) continue;
    const Tensor& tensor = **t;
    w.u8(static_cast<std::uint8_t>(tag));
    w.u32(static_cast<std::uint32_t>(tensor.rank()));
    for (auto d : tensor.dims) w.u32(d);
    for (float v : tensor.data) w.f32(v);
  }
  return w.take();
}

[[nodiscard]] inline EmbeddingBundle decode_devb(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_magic(kDevbMagic);
  const auto version = r.u32();
  if (version != kDevbVersion) {
    throw Error(ErrorKind::Format, "unsupported DEVB version " + std::to_string(version));
  }
  const auto count = r.u32();
  EmbeddingBundle bundle;
  for (std::uint32_t s = 0; s < count; ++s) {
    const auto tag = r.u8();
    auto& slot = detail::section_slot(bundle, tag);
    if (slot) throw Error(ErrorKind::Format, "duplicate DEVB section tag " + std::to_string(tag));
    const auto rank = r.u32();
    if (rank == 0 || rank > 8) throw Error(ErrorKind::Format, "implausible DEVB rank " + std::to_string(rank));
    std::vector<std::uint32_t> dims(rank);
    std::uint64_t elements = 1;
    for (auto& d : dims) {
      d = r.u32();
      elements *= d;
      if (elements > r.remaining()) {
        throw Error(ErrorKind::Format, "DEVB section dims exceed the file size");
      }
    }
    if (elements * 4 > r.remaining()) throw Error(ErrorKind::Format, "truncated DEVB section payload");
    Tensor t;
    t.dims = std::move(dims);
    t.data.resize(elements);
    for (auto& v : t.data) {
      v = r.f32();
      if (!std::isfinite(v)) throw Error(ErrorKind::Format, "non-finite value in DEVB section");
    }
    slot = std::move(t);
  }
  if (r.remaining() != 0) throw Error(ErrorKind::Format, "trailing bytes after DEVB sections");
  bundle.validate();
  return bundle;
}

[[nodiscard]] inline EmbeddingBundle load_embeddings(const std::filesystem::path& path) {
  return decode_devb(read_file_bytes(path));
}

inline void write_embeddings(const EmbeddingBundle& bundle, const std::filesystem::path& path) {
  write_file_bytes(path, encode_devb(bundle));
}

}  // namespace devil::io
