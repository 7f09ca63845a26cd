#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hlim/pehm.hpp"
#include "hlim/shmhd.hpp"

namespace hlim {

enum class MetricMode { l2, h1 };

const char *to_string(MetricMode m);
MetricMode parse_mode(const std::string &s);

/// Everything a run or sweep needs. Defaults are the ones documented in the
/// README; a config file overrides them key by key.
struct SweepConfig {
  GridSpec grid;
  double alpha = 4.0;
  std::vector<double> eps_ladder{0.2, 0.1, 0.05, 0.025};
  double dt = 1e-3;
  double t_end = 0.5;
  std::uint64_t seed = 7;
  SpectrumParams spectrum;
  int sample_every = 10;
  MetricMode mode = MetricMode::l2;
  bool nonlinear = true;

  void validate() const;
};

/// Flat `key = value` text; `eps` may repeat to build the ladder, `#` starts
/// a comment. Unknown keys, bad values and violated invariants throw
/// ValidationError naming the key.
SweepConfig parse_config(const std::string &text, const std::string &origin = "<config>");
SweepConfig load_config(const std::filesystem::path &path);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double gamma_half_predicted = 0.0;
};

/// Least-squares fit of log(error) against log(eps). Needs two or more
/// points with positive finite error.
std::optional<RateFit> fit_rate(const std::vector<double> &eps, const std::vector<double> &err,
                                double gamma_half_predicted);

struct PairSummary {
  double sup_d_l2 = 0.0;
  double final_d_diss_accum = 0.0;
  std::optional<double> sup_d_h1;
  LedgerReport shmhd_ledger;
  LedgerReport pehm_ledger;
  double max_parity_defect = 0.0;
  double max_div_defect = 0.0;
  double max_pressure_discrepancy = 0.0;
};

struct PairResult {
  double eps = 0.0;
  bool ok = false;
  std::string message;
  std::vector<DiffRecord> diffs;
  std::vector<DiagnosticsRecord> shmhd_records;
  std::vector<DiagnosticsRecord> pehm_records;
  PairSummary summary;

  /// sqrt of the sup-in-time squared difference norm for the given mode.
  double error(MetricMode mode) const;
};

struct PairOptions {
  /// Replace the SHMHD trajectory by the hydrostatic lift of the PEHM one.
  /// The differences must then vanish identically.
  bool shmhd_as_pehm_lift = false;
};

/// Matched SHMHD/PEHM runs from identical seed-deterministic initial data.
/// Solver failures are captured in the result, not thrown.
PairResult run_pair(const SweepConfig &cfg, double eps, const PairOptions &options = {});

struct SweepResult {
  SweepConfig config;
  std::vector<PairResult> cells;
  std::optional<RateFit> fit;
  std::string note;
};

/// Runs every ladder cell (up to `jobs` at a time) and fits the rate.
/// Cells are reported in ladder order regardless of completion order.
SweepResult run_sweep(const SweepConfig &cfg, int jobs = 1);

/// Single-system run used by the `simulate` subcommand.
enum class SystemKind { shmhd, pehm };
struct SimulationResult {
  SystemKind system = SystemKind::shmhd;
  double eps = 0.0;
  std::vector<DiagnosticsRecord> records;
  LedgerReport ledger;
  std::optional<ElsasserState> final_shmhd;
  std::optional<PehmState> final_pehm;
  std::size_t cfl_warnings = 0;
};

/// Initial data is generated from the config seed unless `initial` is given.
/// Throws SolverBlowup on blow-up.
SimulationResult simulate(const SweepConfig &cfg, SystemKind system, double eps,
                          const std::optional<ElsasserState> &initial = std::nullopt);

// Reports ----------------------------------------------------------------

/// Writes runs.csv, sweep.csv, summary.txt and rate.svg into `out_dir`.
/// Output depends only on `result`, so repeated calls give identical bytes.
void emit_report(const SweepResult &result, const std::filesystem::path &out_dir);

/// Writes runs.csv and summary.txt for a single simulation.
void emit_simulation_report(const SimulationResult &result, const SweepConfig &cfg,
                            const std::filesystem::path &out_dir);

std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string &name) const;
};

CsvTable read_csv(const std::filesystem::path &path);

// Constraint battery --------------------------------------------------------

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  int states = 0;
  bool pass() const;
};

/// Runs the spectral and constraint invariants on `states` seeded initial
/// states (seeds first_seed, first_seed+1, ...) on the given grid.
VerifyReport run_constraint_battery(const GridSpec &grid, const SpectrumParams &spectrum, int states = 20,
                                    std::uint64_t first_seed = 1);

} // namespace hlim
