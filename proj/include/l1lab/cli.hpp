#pragma once

// Batch front-end. Exit status: 0 ok, 1 verified counterexample, 2 bad
// configuration or capacity (nothing written).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace l1lab::cli {

enum class Command { construct, lambda, lemma_verify, optimality, separate };

enum class Format { json, csv };

struct FamilySpec {
  std::string kind;  // bch | rademacher | random | search | file
  int m = 0;
  int k = 0;
  int n = 0;
  std::size_t count = 0;
  int t = 0;
  std::string path;
};

struct RunConfig {
  Command command = Command::construct;
  FamilySpec family;
  std::optional<int> verify_order;  // construct --verify t
  double q = 4.0;
  std::optional<double> p;
  std::size_t samples = 1000;
  std::size_t N = 0;
  std::vector<std::string> inputs;
  std::vector<int> n_list;
  double epsilon = 0.1;
  std::string strategy = "orthogonal_map";

  std::uint64_t seed = 0;
  std::string output_path;  // stdout when empty
  Format format = Format::json;
  std::size_t exact_threshold = 20;
  int max_bits = 24;
  std::size_t workers = 0;  // 0: available cores
  int restarts = 16;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCounterexample = 1;
inline constexpr int kExitConfig = 2;

/// Parses flags (and an optional --config file, flags win). Throws
/// DomainError with a diagnostic on malformed input.
RunConfig parse(int argc, const char* const* argv);

/// Runs a validated config and writes the report to config.output_path or `out`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse + run with help and error handling; the process entry point.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace l1lab::cli
