#include "wearnet/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wearnet {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30) / 10); }
double watts_to_dbm(double watts) { return 10 * std::log10(watts) + 30; }
double db_to_linear(double db) { return std::pow(10.0, db / 10); }
double linear_to_db(double linear) { return 10 * std::log10(linear); }

double RadioConstants::power_scale() const {
  const double k = wavelength / (4 * kPi);
  return power * k * k;
}

void RadioConstants::validate() const {
  if (!(power > 0)) throw std::invalid_argument("transmit power must be > 0");
  if (!(wavelength > 0)) throw std::invalid_argument("wavelength must be > 0");
  if (!(noise_figure > 0)) throw std::invalid_argument("noise figure must be > 0 (linear)");
  if (!(noise_psd > 0)) throw std::invalid_argument("noise PSD must be > 0");
  if (!(bandwidth > 0)) throw std::invalid_argument("bandwidth must be > 0");
}

double received_power(std::span<const PathComponent> paths, double power, double wavelength) {
  Field2 sum = Field2::Zero();
  for (const auto& p : paths) sum += (p.amplitude * std::polar(1.0, -p.phase)) * p.field;
  const double k = wavelength / (4 * kPi);
  return power * k * k * sum.squaredNorm();
}

double sinr(double signal, std::span<const double> interference, double noise) {
  if (!(noise > 0)) throw std::invalid_argument("noise power must be > 0");
  double total = noise;
  for (double p : interference) total += p;
  return signal / total;
}

double spectral_efficiency(double sinr_linear) {
  if (sinr_linear < 0) throw std::invalid_argument("SINR must be >= 0");
  return std::log2(1 + sinr_linear);
}

CeilingReach LinkGeometry::ceiling_reach(double receiver_z, double body_height, const Enclosure<double>& enc) const {
  return wearnet::ceiling_reach(receiver_z, transmitter.z(), images.angle(Surface::kCeiling), body_height, enc);
}

LinkGeometry link_geometry(const Eigen::Vector3d& tx, const PolarizationOrientation<double>& polarization,
                           const Eigen::Vector3d& rx, const Enclosure<double>& enc) {
  LinkGeometry g;
  g.transmitter = tx;
  g.images = image_set(tx, rx, enc);
  g.lengths[0] = (tx - rx).norm();
  g.orientations[0] = ray_orientation(tx, rx);
  for (std::size_t i = 0; i < 6; ++i) {
    g.lengths[i + 1] = g.images.lengths[i];
    g.orientations[i + 1] = ray_orientation(g.images.points[i], rx);
  }
  for (std::size_t p = 0; p < kPathCount; ++p) {
    const auto a = polarization_angle(polarization, g.orientations[p]);
    if (a.degenerate) ++g.degenerate_polarizations;
    g.polarization[p] = polarization_vector(a.angle);
  }
  g.direct_planar = project_to_plane(tx, rx).distance;
  for (std::size_t w = 0; w < 4; ++w) g.wall_planar[w] = project_to_plane(g.images.points[w], rx).distance;
  return g;
}

PathFields path_fields(const LinkGeometry& link, const SlabMaterial<double>& material) {
  PathFields out;
  const double r0 = link.lengths[0];
  out[0] = link.polarization[0].cast<std::complex<double>>() / r0;
  for (Surface s : kSurfaces) {
    const auto p = static_cast<std::size_t>(index_of(s));
    const double r = link.lengths[p];
    const auto pair = slab_coefficients(link.images.angle(s), material);
    const auto rotation = std::polar(1.0 / r, -2 * kPi * (r - r0) / material.wavelength);
    // Gamma is diagonal; apply it component-wise.
    const auto& pol = link.polarization[p];
    const bool wall = is_wall(s);
    const std::complex<double> g0 = wall ? pair.parallel : pair.perpendicular;
    const std::complex<double> g1 = wall ? pair.perpendicular : pair.parallel;
    out[p] = Field2(rotation * g0 * pol.x(), rotation * g1 * pol.y());
  }
  return out;
}

Field2 combine_paths(const PathFields& fields, const BlockageState& blockage, const PathGains& gains) {
  Field2 sum = Field2::Zero();
  for (std::size_t p = 0; p < kPathCount; ++p) {
    const double w = blockage[p];
    if (w == 0) continue;
    sum += (w * std::sqrt(gains.receive[p] * gains.transmit[p])) * fields[p];
  }
  return sum;
}

std::array<PathComponent, kPathCount> assemble_paths(const LinkGeometry& link, const PathGains& gains,
                                                     const BlockageState& blockage,
                                                     const SlabMaterial<double>& material) {
  std::array<PathComponent, kPathCount> out;
  const double r0 = link.lengths[0];
  for (std::size_t p = 0; p < kPathCount; ++p) {
    const double r = link.lengths[p];
    out[p].amplitude = blockage[p] * std::sqrt(gains.receive[p] * gains.transmit[p]) / r;
    out[p].phase = 2 * kPi * (r - r0) / material.wavelength;
    const Eigen::Vector2cd pol = link.polarization[p].cast<std::complex<double>>();
    if (p == 0) {
      out[p].phase = 0;
      out[p].field = pol;
    } else {
      const Surface s = surface_from_index(static_cast<int>(p));
      out[p].field = reflection_matrix(s, slab_coefficients(link.images.angle(s), material)) * pol;
    }
  }
  return out;
}

SignalField signal_field(const PathFields& fields, const BlockageState& blockage, const PathGains& gains) {
  SignalField out;
  out.direct = std::sqrt(gains.receive[0] * gains.transmit[0]) * fields[0];
  BlockageState reflected = blockage;
  reflected[0] = 0;
  out.reflected = combine_paths(fields, reflected, gains);
  return out;
}

}  // namespace wearnet
