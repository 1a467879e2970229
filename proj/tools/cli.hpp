#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qbf/bounds_global.hpp"
#include "qbf/core_data.hpp"
#include "qbf/curve_io.hpp"
#include "qbf/error.hpp"
#include "qbf/inference.hpp"
#include "qbf/synthetic.hpp"

namespace qbf::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitNumerical = 4,
};

int exit_code_for(const Error& e);

struct TauGrid {
  std::vector<double> explicit_taus;
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<std::size_t> count;
};

struct RunConfig {
  std::string subcommand;

  std::string input;
  ColumnMap columns;

  std::string policy_kind = "threshold";
  double delta = 0.1;
  std::string rank_by = "outcome";

  double g = 0.1;
  std::string side = "lower";
  double c = 0.0;
  double tau_star = 0.3;
  double alpha = 1.0;
  double m = 0.0;
  std::optional<double> bandwidth;
  TauGrid grid;

  std::string statistic = "frontier";
  std::size_t replications = 1000;
  double level = 0.95;
  bool freeze_assignment = false;

  DgpSpec dgp;
  std::size_t runs = 300;
  std::size_t oracle_n = kDefaultOracleN;

  std::string out_dir = ".";
  std::string name;
  bool json = false;
  std::uint64_t seed = 0;

  /// From QBF_THREADS; 0 leaves the OpenMP default. Never recorded in the
  /// manifest since outputs do not depend on it.
  int threads = 0;
};

/// Executes one subcommand and writes <name>.csv, <name>.svg and
/// manifest.json (plus <name>.json with --json) into cfg.out_dir.
int run(const RunConfig& cfg, std::ostream& log);

/// Parses argv, applies QBF_THREADS and dispatches to run().
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qbf::cli
