#pragma once

#include <Eigen/Core>

#include <array>

#include "wearnet/em.hpp"
#include "wearnet/geometry.hpp"
#include "wearnet/random.hpp"

namespace wearnet {

/// Rotationally symmetric two-level (sectored) pattern. Gains are linear.
struct AntennaPattern {
  double main_gain{1};
  double side_gain{1};
  double beamwidth{0};  ///< full main-lobe width (rad)

  /// The main-lobe boundary belongs to the main lobe.
  double gain(double off_axis) const noexcept {
    return off_axis <= beamwidth / 2 ? main_gain : side_gain;
  }

  /// Pattern integrated over the sphere with weight sin(v)/(4 pi); 1 for a
  /// lossless pattern.
  double radiated_power() const noexcept;
};

/// Pattern approximating a sqrt(N) x sqrt(N) planar array: G = N,
/// beamwidth sqrt(3/N), side-lobe gain fixed by power normalization.
AntennaPattern upa_pattern(int elements);

/// Main-lobe axis direction.
struct Beam {
  double azimuth{0};
  double elevation{0};

  Eigen::Vector3d axis() const;
};

Beam beam_towards(const Eigen::Vector3d& from, const Eigen::Vector3d& to);

/// Main-lobe direction of the phantom transmitter across `s` (mirror map).
Beam phantom_beam(const Beam& beam, Surface s);

/// Angle between the receiver's main-lobe axis and the direction of a source
/// seen from the receiver.
double receive_off_axis(const Beam& rx_beam, const RayOrientation<double>& source_from_rx);

/// Angle between a transmitter's main-lobe axis and the direction from that
/// transmitter to the receiver (the reverse of `source_from_rx`).
double transmit_off_axis(const Beam& tx_beam, const RayOrientation<double>& source_from_rx);

/// Paths are indexed 0 = direct, 1..6 = reflection off surface i.
inline constexpr std::size_t kPathCount = 7;

struct PathGains {
  std::array<double, kPathCount> receive;
  std::array<double, kPathCount> transmit;
};

/// Deterministic gains for the direct link and the six phantom links.
/// `orientations[p]` is the direction of path p's source as seen from the
/// receiver.
PathGains link_gains(const AntennaPattern& rx_pattern, const AntennaPattern& tx_pattern, const Beam& rx_beam,
                     const Beam& tx_beam, const std::array<RayOrientation<double>, kPathCount>& orientations);

PathGains link_gains(const AntennaPattern& rx_pattern, const AntennaPattern& tx_pattern, const Beam& rx_beam,
                     const Beam& tx_beam, const Eigen::Vector3d& tx, const Eigen::Vector3d& rx,
                     const Enclosure<double>& enc);

/// Probability that a uniformly oriented main lobe covers a given direction.
double mainlobe_hit_probability(int elements);
double mainlobe_hit_probability(const AntennaPattern& pattern);

/// Transmit gain of an interferer whose beam is uniformly oriented: G with
/// the main-lobe hit probability, g otherwise.
double sample_tx_gain(const AntennaPattern& pattern, Rng& rng);

}  // namespace wearnet
