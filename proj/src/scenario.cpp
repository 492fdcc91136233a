#include "wearnet/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wearnet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxDirectionDraws = 100000;

[[noreturn]] void reject(const std::string& what) { throw std::invalid_argument(what); }

Eigen::Vector2d offset(double distance, double angle) {
  return {distance * std::cos(angle), distance * std::sin(angle)};
}

}  // namespace

std::string_view to_string(ReceiverPlacement p) {
  switch (p) {
    case ReceiverPlacement::kCenter: return "center";
    case ReceiverPlacement::kCorner: return "corner";
    case ReceiverPlacement::kExplicit: return "explicit";
  }
  return "center";
}

ReceiverPlacement parse_receiver_placement(std::string_view name) {
  if (name == "center") return ReceiverPlacement::kCenter;
  if (name == "corner") return ReceiverPlacement::kCorner;
  if (name == "explicit") return ReceiverPlacement::kExplicit;
  reject("receiver placement must be \"center\", \"corner\" or \"explicit\", got \"" + std::string(name) + "\"");
}

std::string_view to_string(SteeringPolicy p) { return p == SteeringPolicy::kOnBody ? "on-body" : "ceiling"; }

SteeringPolicy parse_steering_policy(std::string_view name) {
  if (name == "on-body") return SteeringPolicy::kOnBody;
  if (name == "ceiling") return SteeringPolicy::kCeiling;
  reject("steering policy must be \"on-body\" or \"ceiling\", got \"" + std::string(name) + "\"");
}

std::string_view to_string(OcclusionRule r) { return r == OcclusionRule::kChord ? "chord" : "center-distance"; }

OcclusionRule parse_occlusion_rule(std::string_view name) {
  if (name == "chord") return OcclusionRule::kChord;
  if (name == "center-distance") return OcclusionRule::kCenterDistance;
  reject("occlusion rule must be \"chord\" or \"center-distance\", got \"" + std::string(name) + "\"");
}

Eigen::Vector3d ScenarioConfig::receiver() const {
  switch (placement) {
    case ReceiverPlacement::kCenter: return Eigen::Vector3d::Zero();
    case ReceiverPlacement::kCorner: return kCornerReceiver;
    case ReceiverPlacement::kExplicit: return receiver_position;
  }
  return Eigen::Vector3d::Zero();
}

RadioConstants ScenarioConfig::radio() const {
  return {dbm_to_watts(power_dbm), wavelength, db_to_linear(noise_figure_db),
          dbm_to_watts(noise_psd_dbm_per_hz), bandwidth};
}

BlockageParams ScenarioConfig::blockage_params() const {
  return {body_diameter, wearable_offset, interferers, enclosure.footprint_area()};
}

void ScenarioConfig::validate() const {
  enclosure.validate();
  const double half_h = enclosure.height / 2;
  if (interferers < 0) reject("interferers must be >= 0 (K)");
  if (!(body_diameter > 0)) reject("body_diameter_m must be > 0");
  if (!(body_height > 0 && body_height < enclosure.height))
    reject("body_height_m must satisfy 0 < h_u < H (" + std::to_string(enclosure.height) + " m)");
  if (!(wearable_offset >= 0)) reject("wearable_offset_m must be >= 0");
  if (!(link_distance > 0)) reject("link_distance_m must be > 0");
  if (!(wearable_height_min > -half_h))
    reject("wearable_height_min_m must exceed -H/2 (" + std::to_string(-half_h) + " m)");
  if (!(wearable_height_max < body_height - half_h))
    reject("wearable_height_max_m must stay below h_u - H/2 (" + std::to_string(body_height - half_h) + " m)");
  if (!(wearable_height_min <= wearable_height_max))
    reject("wearable_height_min_m must not exceed wearable_height_max_m");
  const Eigen::Vector3d rx = receiver();
  if (!enclosure.contains(rx)) reject("receiver must lie strictly inside the enclosure");
  if (!(rx.z() < body_height - half_h)) reject("receiver height must stay below h_u - H/2");
  if (!(onbody_beta >= 0 && onbody_beta <= 1)) reject("onbody_beta must lie in [0, 1]");
  if (array_elements < 1) reject("array_elements must be >= 1 (N)");
  if (!(wavelength > 0)) reject("wavelength_m must be > 0");
  if (!(bandwidth > 0)) reject("bandwidth_hz must be > 0");
  if (!std::isfinite(power_dbm)) reject("power_dbm must be finite");
  if (!std::isfinite(noise_figure_db)) reject("noise_figure_db must be finite");
  if (!std::isfinite(noise_psd_dbm_per_hz)) reject("noise_psd_dbm_per_hz must be finite");
  const double r = body_diameter + wearable_offset;
  if (!(kPi * r * r < enclosure.footprint_area()))
    reject("exclusion disk pi (D + r_w)^2 must be smaller than the footprint L W");
}

std::vector<Eigen::Vector2d> Scene::body_centers() const {
  std::vector<Eigen::Vector2d> out;
  out.reserve(interferers.size() + 1);
  out.push_back(receiver.body_center);
  for (const auto& w : interferers) out.push_back(w.body_center);
  return out;
}

ReferencePair sample_reference_pair(const ScenarioConfig& cfg, Rng& rng) {
  ReferencePair out;
  out.receiver = cfg.receiver();
  const double body_distance = cfg.body_diameter / 2 + cfg.wearable_offset;
  out.body_center = out.receiver.head<2>() + offset(body_distance, rng.uniform(0, 2 * kPi));
  for (std::size_t attempt = 0; attempt < kMaxDirectionDraws; ++attempt) {
    const auto dir = polarization_from_uniforms(rng.uniform(), rng.uniform());
    const Eigen::Vector3d tx =
        out.receiver + cfg.link_distance * Eigen::Vector3d(std::sin(dir.elevation) * std::cos(dir.azimuth),
                                                           std::sin(dir.elevation) * std::sin(dir.azimuth),
                                                           std::cos(dir.elevation));
    if (cfg.enclosure.contains(tx)) {
      out.transmitter = tx;
      return out;
    }
    ++out.resamples;
  }
  throw std::runtime_error("no admissible transmitter direction at distance r_0 from the receiver");
}

std::vector<Wearable> sample_interferers(const ScenarioConfig& cfg, const Eigen::Vector3d& receiver, Rng& rng) {
  const auto& enc = cfg.enclosure;
  const double exclusion = cfg.body_diameter + cfg.wearable_offset;
  const double exclusion2 = exclusion * exclusion;
  const double body_distance = cfg.body_diameter / 2 + cfg.wearable_offset;
  std::vector<Wearable> out(static_cast<std::size_t>(cfg.interferers));
  for (auto& w : out) {
    Eigen::Vector2d p;
    do {
      p = {rng.uniform(-enc.length / 2, enc.length / 2), rng.uniform(-enc.width / 2, enc.width / 2)};
    } while (!enc.contains_planar(p) || (p - receiver.head<2>()).squaredNorm() <= exclusion2);
    const double z = rng.uniform(cfg.wearable_height_min, cfg.wearable_height_max);
    w.position = {p.x(), p.y(), z};
    w.body_center = p + offset(body_distance, rng.uniform(0, 2 * kPi));
    const auto b = polarization_from_uniforms(rng.uniform(), rng.uniform());
    w.beam = {b.azimuth, b.elevation};
    w.polarization = sample_polarization(rng);
  }
  return out;
}

Scene sample_scene(const ScenarioConfig& cfg, Rng& rng) {
  Scene scene;
  const auto pair = sample_reference_pair(cfg, rng);
  scene.receiver.position = pair.receiver;
  scene.receiver.body_center = pair.body_center;
  scene.transmitter.position = pair.transmitter;
  scene.transmitter.body_center = pair.body_center;
  scene.direction_resamples = pair.resamples;
  scene.transmitter.polarization = sample_polarization(rng);
  scene.interferers = sample_interferers(cfg, pair.receiver, rng);
  steer_reference(scene, cfg.steering, cfg.enclosure);
  return scene;
}

void steer_reference(Scene& scene, SteeringPolicy policy, const Enclosure<double>& enc) {
  const Eigen::Vector3d& rx = scene.receiver.position;
  const Eigen::Vector3d& tx = scene.transmitter.position;
  if (policy == SteeringPolicy::kOnBody) {
    scene.receiver.beam = beam_towards(rx, tx);
    scene.transmitter.beam = beam_towards(tx, rx);
  } else {
    scene.receiver.beam = beam_towards(rx, image_location(tx, Surface::kCeiling, enc));
    scene.transmitter.beam = beam_towards(tx, receiver_ceiling_image(rx, enc));
  }
}

}  // namespace wearnet
