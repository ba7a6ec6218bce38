#pragma once

// Spawns the CLI binary and collects stdout, stderr and the exit status.
// Shared by the CLI tests and the acceptance binary.

#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

extern char** environ;

namespace clirun {

struct Output {
  int exit_code = -1;
  std::string out;
  std::string err;

  /// The golden-file rendering, with the samples directory written as @SAMPLES@.
  std::string transcript(const std::string& samples_dir = {}) const {
    std::string s = out;
    if (!err.empty()) s += "[stderr]\n" + err;
    s += "[exit " + std::to_string(exit_code) + "]\n";
    if (!samples_dir.empty())
      for (auto p = s.find(samples_dir); p != std::string::npos; p = s.find(samples_dir, p))
        s.replace(p, samples_dir.size(), "@SAMPLES@");
    return s;
  }
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Output run(const std::string& binary, const std::vector<std::string>& args) {
  char out_name[] = "/tmp/wtower_outXXXXXX";
  char err_name[] = "/tmp/wtower_errXXXXXX";
  const int out_fd = mkstemp(out_name);
  const int err_fd = mkstemp(err_name);
  if (out_fd < 0 || err_fd < 0) throw std::runtime_error("mkstemp failed");

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, out_fd, 1);
  posix_spawn_file_actions_adddup2(&actions, err_fd, 2);

  std::vector<std::string> argv_s{binary};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_s) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = 0;
  const int rc = posix_spawn(&pid, binary.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(out_fd);
  close(err_fd);
  Output o;
  if (rc == 0) {
    int status = 0;
    waitpid(pid, &status, 0);
    o.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  }
  o.out = slurp(out_name);
  o.err = slurp(err_name);
  std::remove(out_name);
  std::remove(err_name);
  if (rc != 0) throw std::runtime_error("cannot spawn " + binary);
  return o;
}

/// One line of cases.tsv: name, robust flag, then the arguments, tab separated.
struct Case {
  std::string name;
  bool robust = false;
  std::vector<std::string> args;
};

inline std::vector<Case> load_cases(const std::string& golden_dir, const std::string& samples_dir) {
  std::ifstream in(golden_dir + "/cases.tsv");
  if (!in) throw std::runtime_error("missing " + golden_dir + "/cases.tsv");
  std::vector<Case> cases;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() < 3) throw std::runtime_error("bad case line: " + line);
    Case c{fields[0], fields[1] == "1", {}};
    for (std::size_t i = 2; i < fields.size(); ++i) {
      std::string a = fields[i];
      if (const auto p = a.find("@SAMPLES@"); p != std::string::npos) a.replace(p, 9, samples_dir);
      c.args.push_back(a);
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

/// The same invocation under the other branch-reading convention, for the
/// subcommands that take one.
inline std::vector<std::string> mirrored(const std::vector<std::string>& args) {
  std::vector<std::string> out = args;
  if (!out.empty() && (out[0] == "eta" || out[0] == "milnor" || out[0] == "arf"))
    out.insert(out.begin() + 1, {"--convention", "mirrored"});
  return out;
}

}  // namespace clirun
