#include "wearnet/antenna.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wearnet {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_azimuth(double a) {
  a = std::fmod(a, 2 * kPi);
  if (a < 0) a += 2 * kPi;
  return a;
}

}  // namespace

double AntennaPattern::radiated_power() const noexcept {
  const double c = std::cos(beamwidth / 2);
  return main_gain * (1 - c) / 2 + side_gain * (1 + c) / 2;
}

AntennaPattern upa_pattern(int elements) {
  if (elements < 1) throw std::invalid_argument("array element count must be >= 1, got " + std::to_string(elements));
  const double n = elements;
  const double width = std::sqrt(3.0 / n);
  const double sec = 1.0 / std::cos(width / 4);
  return {n, n + (1 - n) * sec * sec, width};
}

Eigen::Vector3d Beam::axis() const {
  return {std::sin(elevation) * std::cos(azimuth), std::sin(elevation) * std::sin(azimuth), std::cos(elevation)};
}

Beam beam_towards(const Eigen::Vector3d& from, const Eigen::Vector3d& to) {
  const auto o = ray_orientation(to, from);
  return {wrap_azimuth(o.azimuth), o.elevation};
}

Beam phantom_beam(const Beam& beam, Surface s) {
  switch (s) {
    case Surface::kWallPosX:
    case Surface::kWallNegX: return {wrap_azimuth(kPi - beam.azimuth), beam.elevation};
    case Surface::kWallPosY:
    case Surface::kWallNegY: return {wrap_azimuth(-beam.azimuth), beam.elevation};
    case Surface::kCeiling:
    case Surface::kFloor: return {beam.azimuth, kPi - beam.elevation};
  }
  return beam;
}

double receive_off_axis(const Beam& rx_beam, const RayOrientation<double>& src) {
  return detail::acos_clamped(std::cos(rx_beam.elevation) * std::cos(src.elevation) +
                              std::sin(rx_beam.elevation) * std::sin(src.elevation) *
                                  std::cos(src.azimuth - rx_beam.azimuth));
}

double transmit_off_axis(const Beam& tx_beam, const RayOrientation<double>& src) {
  return detail::acos_clamped(-std::cos(tx_beam.elevation) * std::cos(src.elevation) -
                              std::sin(tx_beam.elevation) * std::sin(src.elevation) *
                                  std::cos(src.azimuth - tx_beam.azimuth));
}

PathGains link_gains(const AntennaPattern& rx_pattern, const AntennaPattern& tx_pattern, const Beam& rx_beam,
                     const Beam& tx_beam, const std::array<RayOrientation<double>, kPathCount>& orientations) {
  PathGains out;
  out.receive[0] = rx_pattern.gain(receive_off_axis(rx_beam, orientations[0]));
  out.transmit[0] = tx_pattern.gain(transmit_off_axis(tx_beam, orientations[0]));
  for (Surface s : kSurfaces) {
    const auto p = static_cast<std::size_t>(index_of(s));
    out.receive[p] = rx_pattern.gain(receive_off_axis(rx_beam, orientations[p]));
    out.transmit[p] = tx_pattern.gain(transmit_off_axis(phantom_beam(tx_beam, s), orientations[p]));
  }
  return out;
}

PathGains link_gains(const AntennaPattern& rx_pattern, const AntennaPattern& tx_pattern, const Beam& rx_beam,
                     const Beam& tx_beam, const Eigen::Vector3d& tx, const Eigen::Vector3d& rx,
                     const Enclosure<double>& enc) {
  const auto images = image_set(tx, rx, enc);
  std::array<RayOrientation<double>, kPathCount> orientations;
  orientations[0] = ray_orientation(tx, rx);
  for (std::size_t i = 0; i < 6; ++i) orientations[i + 1] = ray_orientation(images.points[i], rx);
  return link_gains(rx_pattern, tx_pattern, rx_beam, tx_beam, orientations);
}

double mainlobe_hit_probability(const AntennaPattern& pattern) {
  const double s = std::sin(pattern.beamwidth / 4);
  return s * s;
}

double mainlobe_hit_probability(int elements) { return mainlobe_hit_probability(upa_pattern(elements)); }

double sample_tx_gain(const AntennaPattern& pattern, Rng& rng) {
  return rng.bernoulli(mainlobe_hit_probability(pattern)) ? pattern.main_gain : pattern.side_gain;
}

}  // namespace wearnet
