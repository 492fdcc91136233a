#include "wearnet/simulation.hpp"

#include <stdexcept>
#include <string>

namespace wearnet {

std::string_view to_string(BlockageMode m) { return m == BlockageMode::kExact ? "exact" : "stochastic"; }

BlockageMode parse_blockage_mode(std::string_view name) {
  if (name == "exact") return BlockageMode::kExact;
  if (name == "stochastic") return BlockageMode::kStochastic;
  throw std::invalid_argument("blockage mode must be \"exact\" or \"stochastic\", got \"" + std::string(name) + "\"");
}

SceneLinks scene_links(const Scene& scene, const Enclosure<double>& enc) {
  SceneLinks links;
  const Eigen::Vector3d& rx = scene.receiver.position;
  links.signal = link_geometry(scene.transmitter.position, scene.transmitter.polarization, rx, enc);
  links.interferers.reserve(scene.interferers.size());
  for (const auto& w : scene.interferers) links.interferers.push_back(link_geometry(w.position, w.polarization, rx, enc));
  return links;
}

SceneBlockage exact_blockage(const Scene& scene, const SceneLinks& links, const ScenarioConfig& cfg) {
  const auto centers = scene.body_centers();
  const BlockerField field(scene.receiver.position, centers, cfg.body_diameter, cfg.enclosure, cfg.occlusion);
  SceneBlockage out;
  out.signal = field.signal(links.signal.images, 1.0);
  out.interferers.reserve(links.interferers.size());
  for (const auto& link : links.interferers)
    out.interferers.push_back(field.interferer(link.transmitter, link.images, cfg.body_height));
  return out;
}

SceneBlockage stochastic_blockage(const Scene& scene, const SceneLinks& links, const ScenarioConfig& cfg, Rng& rng,
                                  ClampTally* tally) {
  const BlockageParams params = cfg.blockage_params();
  const double rx_z = scene.receiver.position.z();
  SceneBlockage out;
  out.signal = sample_signal_blockage(links.signal.wall_planar, links.signal.direct_planar, 1.0, params, rng, tally);
  out.interferers.reserve(links.interferers.size());
  for (const auto& link : links.interferers) {
    const InterfererLinkSummary summary{link.direct_planar, link.wall_planar,
                                        link.ceiling_reach(rx_z, cfg.body_height, cfg.enclosure)};
    out.interferers.push_back(sample_interferer_blockage(summary, params, rng, tally));
  }
  return out;
}

SceneBlockage scene_blockage(BlockageMode mode, const Scene& scene, const SceneLinks& links,
                             const ScenarioConfig& cfg, Rng& rng, ClampTally* tally) {
  return mode == BlockageMode::kExact ? exact_blockage(scene, links, cfg)
                                      : stochastic_blockage(scene, links, cfg, rng, tally);
}

SceneGains scene_gains(const Scene& scene, const SceneLinks& links, const AntennaPattern& pattern, bool stochastic_tx,
                       Rng* rng) {
  if (stochastic_tx && !rng) throw std::invalid_argument("stochastic transmit gains need a random stream");
  SceneGains out;
  const Beam& rx_beam = scene.receiver.beam;
  out.signal = link_gains(pattern, pattern, rx_beam, scene.transmitter.beam, links.signal.orientations);
  out.interferers.reserve(links.interferers.size());
  for (std::size_t k = 0; k < links.interferers.size(); ++k) {
    PathGains g = link_gains(pattern, pattern, rx_beam, scene.interferers[k].beam, links.interferers[k].orientations);
    if (stochastic_tx)
      for (auto& t : g.transmit) t = sample_tx_gain(pattern, *rng);
    out.interferers.push_back(g);
  }
  return out;
}

SceneFields scene_fields(const SceneLinks& links, const SlabMaterial<double>& material) {
  SceneFields out;
  out.signal = path_fields(links.signal, material);
  out.interferers.reserve(links.interferers.size());
  for (const auto& link : links.interferers) out.interferers.push_back(path_fields(link, material));
  return out;
}

SceneOutcome evaluate_scene(const SceneFields& fields, const SceneBlockage& blockage, const SceneGains& gains,
                            const RadioConstants& radio) {
  SceneOutcome out;
  out.signal = signal_field(fields.signal, blockage.signal, gains.signal);
  const double scale = radio.power_scale();
  for (std::size_t k = 0; k < fields.interferers.size(); ++k)
    out.interference += scale * combine_paths(fields.interferers[k], blockage.interferers[k], gains.interferers[k])
                                    .squaredNorm();
  return out;
}

}  // namespace wearnet
