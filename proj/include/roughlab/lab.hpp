#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "roughlab/error.hpp"
#include "roughlab/integral.hpp"
#include "roughlab/lift.hpp"
#include "roughlab/solver.hpp"
#include "roughlab/vector_field.hpp"

namespace roughlab::lab {

/// Invalid or malformed experiment configuration. `key` is the dotted path of
/// the offending entry (empty for syntax errors), `line` its 1-based line in
/// the source text (0 when unknown).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string key, std::size_t line)
      : Error("lab", what), key_(std::move(key)), line_(line) {}
  const std::string& key() const { return key_; }
  std::size_t line() const { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

/// A named vector field. `lambda` holds Λ in deriv1 layout (m*q*m entries);
/// a scalar `lambda_scalar` stands for Λ_abc = λ δ_ac.
struct FieldSpec {
  std::string name = "linear";  // constant | linear | tanh | sin | rotation
  std::vector<double> lambda;
  std::optional<double> lambda_scalar;
  double scale = 1.0;
  std::vector<double> a;      // constant value, m*q entries
  std::vector<double> omega;  // rotation frequencies, q entries
};

enum class ZMode { identity, integral, custom };
enum class LiftKind { geometric, ito };
enum class OutputFormat { csv, json };

struct ExperimentConfig {
  double alpha = 0.45;
  double horizon = 1.0;
  std::size_t n = 1024;
  GridKind grid = GridKind::uniform;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  SignalSpec driver;
  LiftKind lift = LiftKind::geometric;
  FieldSpec field;
  std::vector<double> y0{1.0};
  double y0_shift = 0.0;  // added to every component of the approximating solve's y0
  ZMode z_mode = ZMode::identity;
  FieldSpec z_field{"sin", {}, 1.0, 1.0, {}, {}};  // G in Z = ∫ G(X) dX
  std::size_t z_dim = 0;                           // custom mode only
  std::vector<double> z_values;                    // custom mode: (n+1) * z_dim
  std::vector<double> z_derivatives;               // custom mode: (n+1) * z_dim * d
  std::vector<std::size_t> levels;
  SolveConfig solver;
  std::string output_path;
  OutputFormat format = OutputFormat::csv;
};

/// Parses a schema-1 JSON configuration. `source` names the input in messages.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "config");

/// Cross-field checks (alpha range, power-of-two n with levels, ...).
void validate(const ExperimentConfig& cfg, const std::string& text = {});

/// Human-readable description of the configuration schema.
std::string schema_help();

// Builders shared by the experiments. Trial t uses seed derive_seed(seed, t).
Grid build_grid(const ExperimentConfig& cfg);
RoughPathPtr build_driver(const ExperimentConfig& cfg, std::size_t trial);
ControlledPath build_z(const ExperimentConfig& cfg, RoughPathPtr x);
VectorField build_field(const FieldSpec& spec, std::size_t m, std::size_t q);

/// Worker count: hardware concurrency capped by ROUGHLAB_THREADS, never above `tasks`.
std::size_t worker_count(std::size_t tasks);

// ---- rates

struct RatesTrial {
  std::size_t trial = 0;
  RateFit mesh;
  RateFit local;
  std::vector<std::size_t> mesh_factors;  // subsampling factor of each mesh point
  std::vector<std::size_t> local_cells;   // window length in cells of each local point
};

struct RatesResult {
  std::vector<RatesTrial> trials;
  std::optional<double> median_mesh;   // empty when every fit is degenerate
  std::optional<double> median_local;
};

/// Per trial: mesh_convergence of ∫ F(Z) dZ over the configured levels and
/// the local expansion regression over dyadic windows.
RatesResult run_rates(const ExperimentConfig& cfg);

// ---- contraction

struct ContractionResult {
  SolveReport report;
  std::optional<std::string> failure;  // solver message when no window was admissible
};

/// One solve of dY = F(Y) dZ on the trial-0 driver.
ContractionResult run_contraction(const ExperimentConfig& cfg);

// ---- stability

struct StabilityRow {
  std::size_t trial = 0;
  std::size_t factor = 1;
  double x_dist = 0.0;        // ‖X - X̃‖_α + ‖𝕏 - 𝕏̃‖_{2α}
  double z_dist = 0.0;        // d_{X,X̃;α}(Z, Z̃)
  double y_dist = 0.0;        // d_{X,X̃;α}(Y, Ỹ)
  double y0_gap = 0.0;        // |Y_0 - Ỹ_0| + |Y'_0 - Ỹ'_0|
  double z0_gap = 0.0;        // |Z_0 - Z̃_0| + |Z'_0 - Z̃'_0|
  double terminal_gap = 0.0;  // |Y_T - Ỹ_T|
};

struct StabilityVerdict {
  bool y_decreasing = false;       // median y_dist strictly decreasing under refinement
  double final_over_initial = 0.0;  // median y_dist at the finest over the coarsest level
  bool inputs_decreasing = false;  // x_dist, z_dist strictly decreasing; columns at rounding level (<= 1e-12) exempt
  std::string text() const;
};

struct StabilityResult {
  std::vector<StabilityRow> rows;     // sorted by (trial, level order)
  std::vector<StabilityRow> medians;  // one per level, trial field unused
  StabilityVerdict verdict;
  std::optional<std::string> failure;
  std::string failure_module;
};

/// Reference driver X versus approximants X̃ = relift_linear(X, f) for each
/// level f; solves both equations and reports both sides of the stability
/// estimate.
StabilityResult run_stability(const ExperimentConfig& cfg);

// ---- output

/// 17 significant digits, round-trip exact.
std::string format_number(double v);

void write_rates_csv(std::ostream& out, const RatesResult& r);
void write_contraction_csv(std::ostream& out, const ContractionResult& r);
void write_stability_csv(std::ostream& out, const StabilityResult& r);
std::string rates_json(const RatesResult& r);
std::string contraction_json(const ContractionResult& r);
std::string stability_json(const StabilityResult& r);

/// Entry point of the roughlab command line tool.
int cli_main(int argc, char** argv);

}  // namespace roughlab::lab
