#pragma once

#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>
#include <vector>

#include "devil/core/error.hpp"

extern char** environ;

namespace devil::proc {

struct ProcessResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr, interleaved
};

/// Runs argv[0] (PATH lookup) without a shell and captures its combined output.
/// Failure to start the program is a tool error; a non-zero exit is reported
/// through `exit_code` and left to the caller.
[[nodiscard]] inline ProcessResult run(const std::vector<std::string>& argv) {
  if (argv.empty()) throw Error(ErrorKind::Tool, "empty command line");
  int fds[2];
  if (pipe(fds) != 0) throw Error(ErrorKind::Tool, std::string("pipe failed: ") + std::strerror(errno));

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addclose(&actions, fds[0]);
  posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, fds[1], STDERR_FILENO);
  posix_spawn_file_actions_addclose(&actions, fds[1]);

  std::vector<char*> args;
  args.reserve(argv.size() + 1);
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(fds[1]);
  if (rc != 0) {
    close(fds[0]);
    throw Error(ErrorKind::Tool, "cannot start '" + argv[0] + "': " + std::strerror(rc));
  }

  ProcessResult result;
  char buf[4096];
  while (true) {
    const ssize_t got = read(fds[0], buf, sizeof buf);
    if (got > 0) {
      result.output.append(buf, static_cast<std::size_t>(got));
    } else if (got == 0 || errno != EINTR) {
      break;
    }
  }
  close(fds[0]);

  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw Error(ErrorKind::Tool, std::string("waitpid failed: ") + std::strerror(errno));
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  // posix_spawnp reports a missing executable as exit status 127 on glibc.
  if (result.exit_code == 127 && result.output.empty()) {
    throw Error(ErrorKind::Tool, "cannot start '" + argv[0] + "': not found");
  }
  return result;
}

}  // namespace devil::proc
