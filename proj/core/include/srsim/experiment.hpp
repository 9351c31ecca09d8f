#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "srsim/channel_model.hpp"
#include "srsim/csr_solver.hpp"
#include "srsim/psr_solver.hpp"
#include "srsim/solver_config.hpp"
#include "srsim/types.hpp"

namespace srsim {

enum class Scenario { Csr, Psr };
enum class Scheme { Joint, FixedFilter, RandomPhases };

std::string to_string(Scenario s);
std::string to_string(Scheme s);
Scenario scenario_from_string(const std::string& s);
Scheme scheme_from_string(const std::string& s);

// One Monte Carlo campaign: a parameter sweep over a fixed deployment.
// Powers enter in dBm and are converted on parse; everything downstream is
// linear. The sweep parameter is one of "p_max_dbm", "m_elems", "irs_x",
// "r_th".
struct ExperimentConfig {
  SystemParams params;
  Geometry geometry;
  PathLossModel path_loss;
  FadingModel fading;
  SolverConfig solver;
  std::vector<Scenario> scenarios{Scenario::Csr, Scenario::Psr};
  std::vector<Scheme> schemes{Scheme::Joint, Scheme::FixedFilter,
                              Scheme::RandomPhases};
  std::string sweep_param = "p_max_dbm";
  std::vector<double> sweep_values;
  int n_realizations = 200;
  std::uint64_t master_seed = 1;
  int workers = 0;  // 0 = hardware concurrency
  std::string label = "experiment";

  void validate() const;
};

// JSON round trip; parse applies dBm -> W conversions and field defaults.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);
std::string canonical_config_json(const ExperimentConfig& cfg);

// System/geometry with one sweep value applied.
struct PointSetup {
  SystemParams params;
  Geometry geometry;
};
PointSetup apply_sweep_value(const ExperimentConfig& cfg, double value);

// Deterministic per-(point, realization) channel seed.
std::uint64_t realization_seed(std::uint64_t master, int point, int realization);

// One solver run inside a campaign.
struct SolveRecord {
  int point = 0;
  int realization = 0;
  Scenario scenario = Scenario::Csr;
  Scheme scheme = Scheme::Joint;
  bool ok = true;        // false when the solver threw
  bool feasible = false;
  bool converged = false;
  double ber = 0.5;
  double rate = 0.0;
  double gamma = 0.0;
  int iters = 0;              // outer iterations (penalty rounds / bisections)
  double wall_seconds = 0.0;  // not serialized; timing is run-dependent
};

struct PointSummary {
  int point = 0;
  double sweep_value = 0.0;
  Scenario scenario = Scenario::Csr;
  Scheme scheme = Scheme::Joint;
  int n_total = 0;
  int n_feasible = 0;
  int n_failed = 0;
  double mean_ber = 0.0;   // over feasible realizations
  double mean_rate = 0.0;  // over feasible realizations
  double mean_gamma = 0.0; // over feasible realizations
  double outage = 0.0;     // infeasible fraction
  double success_rate = 0.0;  // converged fraction of non-failed runs
  double mean_iters = 0.0;    // over non-failed runs
  double mean_seconds = 0.0;  // over non-failed runs; excluded from the CSV
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SolveRecord> records;     // ordered by (point, realization, ...)
  std::vector<PointSummary> summaries;  // ordered by (point, scenario, scheme)
};

// Runs every (scheme, scenario) at every sweep point for every realization.
// Channels for a record depend only on (master_seed, point, realization), so
// schemes at one point share draws and reports are reproducible bit-for-bit
// regardless of the worker count. Solver exceptions are counted, not fatal.
ExperimentReport run_sweep(const ExperimentConfig& cfg);

// Reference scheme runners for a single instance: transmit filter pinned to
// the full-power direct-link match (phases still optimized), and phases
// pinned to a random draw (filter still optimized). Exposed for tests and
// the CLI; run_sweep uses them internally.
CsrSolution run_baseline1_csr(const ChannelSet& ch, const SystemParams& p,
                              const SolverConfig& cfg);
CsrSolution run_baseline2_csr(const ChannelSet& ch, const SystemParams& p,
                              const SolverConfig& cfg, std::uint64_t phase_seed);
PsrSolution run_baseline1_psr(const ChannelSet& ch, const SystemParams& p,
                              const SolverConfig& cfg);
PsrSolution run_baseline2_psr(const ChannelSet& ch, const SystemParams& p,
                              const SolverConfig& cfg, std::uint64_t phase_seed);

// Random unit-modulus phases for the frozen-phase scheme.
PhaseShifts random_phases(int m_elems, std::uint64_t seed);

// Feasibility-only campaign over an r_th grid: per realization the commensal
// side runs the rate probe and the parasitic side checks the zero-target
// floor. The joint scheme counts a realization feasible when either the free
// alternation or the restricted one reaches the floor (its feasible set
// contains the restricted scheme's), so restriction can only raise outage.
struct OutagePoint {
  double r_th = 0.0;
  Scenario scenario = Scenario::Csr;
  Scheme scheme = Scheme::Joint;
  int n_total = 0;
  int n_infeasible = 0;
  double outage = 0.0;
};
std::vector<OutagePoint> estimate_outage(const ExperimentConfig& cfg,
                                         const std::vector<double>& r_th_grid);

// Long-format CSV: one row per (sweep point, scenario, scheme, metric), with
// a fixed header and %.17g value formatting so equal reports are equal bytes.
void write_csv(const ExperimentReport& report, std::ostream& os);
void write_csv_file(const ExperimentReport& report, const std::string& path);
void write_outage_csv(const std::vector<OutagePoint>& rows,
                      const ExperimentConfig& cfg, std::ostream& os);

// Provenance sidecar: canonical config, its FNV-1a hash, seed and library
// version. Deliberately no wall-clock fields; two equal runs are equal files.
void write_provenance(const ExperimentReport& report, std::ostream& os);
void write_provenance_file(const ExperimentReport& report,
                           const std::string& path);

std::uint64_t fnv1a64(const std::string& text);
const char* library_version();

}  // namespace srsim
