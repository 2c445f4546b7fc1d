#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace lumprank::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;  // also: a verification check failed
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitDenseLimit = 3;

struct CliConfig {
  std::string command;
  std::string graph_path;
  double alpha = 0.85;
  std::string v_spec = "uniform";
  std::string w_spec = "uniform";
  double tol = 1e-10;
  std::size_t max_iter = 1000;
  std::size_t dense_limit = 2000;
  std::uint64_t seed = 1;
  std::optional<std::size_t> top;

  // gen
  std::size_t nodes = 100;
  double dangling_frac = 0.5;
  std::size_t avg_degree = 8;

  // verify
  bool decomposition_only = false;
  bool negative_control = false;
};

int cmd_rank(const CliConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_compare(const CliConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const CliConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_gen(const CliConfig& cfg, std::ostream& out, std::ostream& err);

/// Dispatches on cfg.command.
int run(const CliConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace lumprank::cli
