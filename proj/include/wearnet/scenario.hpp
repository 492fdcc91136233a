#pragma once

// Random network geometry: reference pair, interfering wearables outside the
// receiver's exclusion disk, body circles, beams and polarization axes.

#include <Eigen/Core>

#include <cstddef>
#include <string_view>
#include <vector>

#include "wearnet/antenna.hpp"
#include "wearnet/blockage_exact.hpp"
#include "wearnet/blockage_stochastic.hpp"
#include "wearnet/channel.hpp"
#include "wearnet/em.hpp"
#include "wearnet/geometry.hpp"
#include "wearnet/random.hpp"

namespace wearnet {

enum class ReceiverPlacement { kCenter, kCorner, kExplicit };
enum class SteeringPolicy { kOnBody, kCeiling };

std::string_view to_string(ReceiverPlacement p);
ReceiverPlacement parse_receiver_placement(std::string_view name);
std::string_view to_string(SteeringPolicy p);
SteeringPolicy parse_steering_policy(std::string_view name);
std::string_view to_string(OcclusionRule r);
OcclusionRule parse_occlusion_rule(std::string_view name);

/// Corner receiver location (m).
inline const Eigen::Vector3d kCornerReceiver{8.5, 1.5, 0.25};

struct ScenarioConfig {
  Enclosure<double> enclosure{};
  int interferers{20};                  ///< K
  double body_diameter{0.5};            ///< D (m)
  double body_height{1.75};             ///< h_u (m)
  double wearable_offset{0.1};          ///< r_w (m)
  double link_distance{0.25};           ///< r_0 (m)
  double wearable_height_min{-0.75};    ///< lower end of the interferer height band (m)
  double wearable_height_max{0.25};     ///< upper end of the interferer height band (m)
  ReceiverPlacement placement{ReceiverPlacement::kCenter};
  Eigen::Vector3d receiver_position{0, 0, 0};  ///< used when placement is explicit
  double onbody_beta{0};                ///< beta_0
  Reflectivity reflectivity{Reflectivity::kHigh};
  int array_elements{1};                ///< N
  double power_dbm{0};
  double wavelength{5e-3};
  double noise_figure_db{9};
  double noise_psd_dbm_per_hz{-174};
  double bandwidth{1e9};
  SteeringPolicy steering{SteeringPolicy::kOnBody};
  OcclusionRule occlusion{OcclusionRule::kChord};
  /// Interferer transmit gains drawn from the main-lobe hit probability
  /// instead of evaluated from sampled beams.
  bool stochastic_transmit_gains{false};

  Eigen::Vector3d receiver() const;
  RadioConstants radio() const;
  BlockageParams blockage_params() const;
  SlabMaterial<double> material() const { return reflectivity_preset(reflectivity, wavelength); }
  AntennaPattern pattern() const { return upa_pattern(array_elements); }

  /// Throws ConfigError-style std::invalid_argument naming the violated
  /// constraint.
  void validate() const;
};

struct Wearable {
  Eigen::Vector3d position{Eigen::Vector3d::Zero()};
  Eigen::Vector2d body_center{Eigen::Vector2d::Zero()};
  Beam beam{};
  PolarizationOrientation<double> polarization{0, 0};
};

struct Scene {
  Wearable receiver;     ///< X^r_0; polarization unused
  Wearable transmitter;  ///< X_0, same body as the receiver
  std::vector<Wearable> interferers;
  std::size_t direction_resamples{0};

  /// Reference body first, then one circle per interferer.
  std::vector<Eigen::Vector2d> body_centers() const;
};

struct ReferencePair {
  Eigen::Vector3d receiver;
  Eigen::Vector3d transmitter;
  Eigen::Vector2d body_center;
  std::size_t resamples{0};
};

/// Reference body at D/2 + r_w from the receiver in a uniform direction, then
/// X_0 at r_0 in a uniform 3-D direction; directions leaving the enclosure
/// are redrawn.
ReferencePair sample_reference_pair(const ScenarioConfig& cfg, Rng& rng);

/// K interferers: planar positions uniform on the footprint minus the
/// exclusion disk (rejection), heights uniform on the band, own body circle
/// at D/2 + r_w in a uniform direction, beam and polarization uniform on the
/// sphere.
std::vector<Wearable> sample_interferers(const ScenarioConfig& cfg, const Eigen::Vector3d& receiver, Rng& rng);

/// Reference pair, its polarization, the interferers, and reference beams
/// per `cfg.steering`.
Scene sample_scene(const ScenarioConfig& cfg, Rng& rng);

/// On-body: both beams along the direct ray. Ceiling: receiver beam at the
/// transmitter's ceiling image, transmitter beam at the receiver's ceiling
/// image.
void steer_reference(Scene& scene, SteeringPolicy policy, const Enclosure<double>& enc);

}  // namespace wearnet
