#pragma once

// Monte Carlo experiment engine.
//
// Replication `rep` of grid point `point` draws its scene from
// Rng(seed, {point, rep, 0}) and its stochastic blockage from
// Rng(seed, {point, rep, 1}); stochastic transmit gains for array size N come
// from Rng(seed, {point, rep, 2, N}). Scenes are therefore shared by every
// mode, material, array and beta_0 evaluated at one grid point. Means are
// reduced over fixed blocks of replications merged in block order, so every
// output is independent of the worker count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "wearnet/scenario.hpp"
#include "wearnet/simulation.hpp"
#include "wearnet/stats.hpp"

namespace wearnet {

enum class ExperimentId { kFig5, kFig6, kFig8a, kFig8b, kFig9, kFig10, kCustom };
enum class ModeSelection { kExact, kStochastic, kBoth };

std::string_view to_string(ExperimentId id);
ExperimentId parse_experiment_id(std::string_view name);
std::string_view to_string(ModeSelection m);
ModeSelection parse_mode_selection(std::string_view name);
std::vector<BlockageMode> modes_of(ModeSelection m);

struct ExperimentSpec {
  ExperimentId id{ExperimentId::kCustom};
  std::uint64_t seed{1};
  std::size_t replications{100000};
  ModeSelection mode{ModeSelection::kBoth};
  std::vector<int> interferers;             ///< K grid
  std::vector<double> wearable_offsets;     ///< r_w grid (m)
  std::vector<int> array_elements;          ///< N grid
  std::vector<double> bandwidths;           ///< B grid (Hz)
  std::vector<double> onbody_betas;         ///< beta_0 grid
  std::vector<double> shadow_losses_db;     ///< 20 log10(1 / beta_0) grid
  std::vector<Reflectivity> reflectivities;
  std::vector<ReceiverPlacement> placements;
  unsigned workers{1};

  void validate() const;
};

/// Grid defaults for each experiment id; fields left empty in a loaded spec
/// are filled from here.
ExperimentSpec default_experiment(ExperimentId id);
/// Scenario defaults each experiment id implies on top of the base defaults.
ScenarioConfig default_scenario(ExperimentId id);
void fill_defaults(ExperimentSpec& spec);

/// Runs fn(i) for i in [0, n) on `workers` threads; the first exception is
/// rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

// ---- Blockage validation -------------------------------------------------

struct BlockageValidationRow {
  int interferers;
  double wearable_offset;
  std::string path_class;  ///< direct | wall | ceiling | signal-wall
  double p_exact;
  double p_stochastic;
  double exact_std_error;  ///< between-scene standard error of p_exact
  std::size_t trials;
};

struct BlockageValidation {
  std::vector<BlockageValidationRow> rows;
  std::size_t clamps{0};
};

/// Average exact blockage frequencies and stochastic probabilities per path
/// class over (K, r_w) grid points. Always evaluates both modes.
BlockageValidation run_blockage_validation(const ScenarioConfig& base, const ExperimentSpec& spec);

// ---- SINR CDFs ------------------------------------------------------------

struct SinrSeries {
  int interferers;
  BlockageMode mode;
  double onbody_beta;
  Reflectivity reflectivity;
  std::vector<double> sinr;  ///< linear, sorted ascending
};

std::vector<SinrSeries> run_sinr_cdf(const ScenarioConfig& base, const ExperimentSpec& spec);

// ---- Mean spectral efficiency sweeps --------------------------------------

struct MeanSeRow {
  ReceiverPlacement placement;
  double wearable_offset;
  int interferers;
  double bandwidth;
  double onbody_beta;
  Reflectivity reflectivity;
  BlockageMode mode;
  MeanEstimate se;
};

/// Grid: placement x r_w x K (scene-level) and reflectivity x B x beta_0
/// (evaluated on shared scenes).
std::vector<MeanSeRow> run_mean_se_sweeps(const ScenarioConfig& base, const ExperimentSpec& spec);

// ---- Antenna CDFs ---------------------------------------------------------

struct SeSeries {
  int interferers;
  int array_elements;
  Reflectivity reflectivity;
  BlockageMode mode;
  bool stochastic_gains;
  std::vector<double> se;  ///< sorted ascending
};

std::vector<SeSeries> run_antenna_cdf(const ScenarioConfig& base, const ExperimentSpec& spec);

// ---- Shadow-loss crossover ------------------------------------------------

struct ShadowRow {
  int interferers;
  int array_elements;
  Reflectivity reflectivity;
  BlockageMode mode;
  double shadow_loss_db;
  MeanEstimate ceiling;    ///< C^c
  MeanEstimate on_body;    ///< C^o
  MeanEstimate difference; ///< C^c - C^o, paired per scene
};

struct ShadowCrossing {
  int interferers;
  int array_elements;
  Reflectivity reflectivity;
  BlockageMode mode;
  double crossing_db;  ///< NaN when the difference never turns non-negative
};

struct ShadowSweep {
  std::vector<ShadowRow> rows;
  std::vector<ShadowCrossing> crossings;
};

ShadowSweep run_shadow_crossover(const ScenarioConfig& base, const ExperimentSpec& spec);

/// First upward zero crossing of y over x by linear interpolation; NaN if none.
double zero_crossing(const std::vector<double>& x, const std::vector<double>& y);

// ---- Custom ---------------------------------------------------------------

struct CustomRecord {
  std::size_t replication;
  BlockageMode mode;
  double sinr;  ///< linear
};

struct CustomRun {
  std::vector<CustomRecord> records;
  std::vector<MeanEstimate> mean_se;  ///< per mode, in modes_of(spec.mode) order
  std::size_t direction_resamples{0};
  std::size_t clamps{0};
};

/// Replications of the scenario exactly as configured.
CustomRun run_custom(const ScenarioConfig& cfg, const ExperimentSpec& spec);

// ---- CSV ------------------------------------------------------------------

/// SINR in dB, floored at -60 dB for plotting.
double plot_db(double linear);

struct CsvContext {
  std::string experiment;
  std::string config_hash;
  std::uint64_t seed;
};

void write_blockage_csv(std::ostream& os, const CsvContext& ctx, const BlockageValidation& v);
void write_sinr_csv(std::ostream& os, const CsvContext& ctx, const std::vector<SinrSeries>& series);
void write_mean_se_csv(std::ostream& os, const CsvContext& ctx, const std::vector<MeanSeRow>& rows);
void write_antenna_csv(std::ostream& os, const CsvContext& ctx, const std::vector<SeSeries>& series);
void write_shadow_csv(std::ostream& os, const CsvContext& ctx, const ShadowSweep& sweep);
void write_shadow_crossings_csv(std::ostream& os, const CsvContext& ctx, const ShadowSweep& sweep);
void write_custom_csv(std::ostream& os, const CsvContext& ctx, const CustomRun& run);

}  // namespace wearnet
