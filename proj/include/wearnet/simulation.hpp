#pragma once

// One Monte Carlo replication, split into stages so that experiments can
// share a scene across blockage modes, materials, arrays and beta_0 values.

#include <string_view>
#include <vector>

#include "wearnet/channel.hpp"
#include "wearnet/scenario.hpp"

namespace wearnet {

enum class BlockageMode { kExact, kStochastic };

std::string_view to_string(BlockageMode m);
BlockageMode parse_blockage_mode(std::string_view name);

struct SceneLinks {
  LinkGeometry signal;
  std::vector<LinkGeometry> interferers;
};

SceneLinks scene_links(const Scene& scene, const Enclosure<double>& enc);

/// Blockage of every path. The intended signal's direct coefficient is left
/// at 1; beta_0 is applied when the signal power is evaluated.
struct SceneBlockage {
  BlockageState signal;
  std::vector<BlockageState> interferers;
};

SceneBlockage exact_blockage(const Scene& scene, const SceneLinks& links, const ScenarioConfig& cfg);

/// Draw order: the signal's four walls, then per interferer the ceiling and
/// auxiliary factors followed by its four walls.
SceneBlockage stochastic_blockage(const Scene& scene, const SceneLinks& links, const ScenarioConfig& cfg, Rng& rng,
                                  ClampTally* tally = nullptr);

SceneBlockage scene_blockage(BlockageMode mode, const Scene& scene, const SceneLinks& links,
                             const ScenarioConfig& cfg, Rng& rng, ClampTally* tally = nullptr);

struct SceneGains {
  PathGains signal;
  std::vector<PathGains> interferers;
};

/// Receive gains from the reference receiver's beam; transmit gains from each
/// transmitter's beam, or for interferers with `stochastic_tx` set, drawn per
/// path from the main-lobe hit probability (`rng` required then).
SceneGains scene_gains(const Scene& scene, const SceneLinks& links, const AntennaPattern& pattern,
                       bool stochastic_tx = false, Rng* rng = nullptr);

struct SceneFields {
  PathFields signal;
  std::vector<PathFields> interferers;
};

SceneFields scene_fields(const SceneLinks& links, const SlabMaterial<double>& material);

struct SceneOutcome {
  SignalField signal;
  double interference{0};  ///< sum of P_k (W)

  double sinr(double onbody_beta, const RadioConstants& radio) const {
    return signal.power(onbody_beta, radio) / (radio.noise_power() + interference);
  }
};

SceneOutcome evaluate_scene(const SceneFields& fields, const SceneBlockage& blockage, const SceneGains& gains,
                            const RadioConstants& radio);

}  // namespace wearnet
