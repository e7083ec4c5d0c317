#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

namespace testkit {

struct RunResult {
  int code = -1;
  std::string err;
};

// Runs the command-line tool with `args`, stdout discarded unless redirected
// in `args`; stderr captured.
inline RunResult run_cli(const std::string& args, const std::filesystem::path& dir) {
  const auto err_path = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + CORNBN_CLI + "\" " + args + " 2> \"" + err_path.string() + "\"";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  return r;
}

}  // namespace testkit
