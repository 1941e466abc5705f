#pragma once

#include <string>
#include <vector>

namespace tmlab::acceptance {

struct Verdict {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

struct Options {
  /// Path of the tmlab executable, used by the determinism criterion. Empty
  /// marks that criterion as failed with a note.
  std::string cli_path;
};

constexpr int kCriteria = 12;

Verdict run_criterion(int id, const Options& opt);
std::vector<Verdict> run_all(const Options& opt, const std::vector<int>& only = {});

/// "PASS <id> <name>: <detail>"
std::string format(const Verdict& v);

}  // namespace tmlab::acceptance
