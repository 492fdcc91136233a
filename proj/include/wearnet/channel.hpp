#pragma once

// Coherent multipath received power, SINR and spectral efficiency.
//
// Each path contributes beta * sqrt(Gr Gt) / r * exp(-j dphi) * Gamma * p to a
// shared 2-D complex field; the received power is P (lambda / 4 pi)^2 times
// the squared norm of the sum.

#include <Eigen/Core>

#include <array>
#include <complex>
#include <cstddef>
#include <span>

#include "wearnet/antenna.hpp"
#include "wearnet/blockage.hpp"
#include "wearnet/em.hpp"
#include "wearnet/geometry.hpp"

namespace wearnet {

using Field2 = Eigen::Vector2cd;

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double linear);

struct RadioConstants {
  double power{1e-3};          ///< P (W)
  double wavelength{5e-3};     ///< lambda (m)
  double noise_figure{7.943282347242815};  ///< F_N (linear, 9 dB)
  double noise_psd{3.981071705534953e-21};  ///< N_0 (W/Hz, -174 dBm/Hz)
  double bandwidth{1e9};       ///< B (Hz)

  /// sigma^2 = F_N N_0 B (W).
  double noise_power() const { return noise_figure * noise_psd * bandwidth; }
  /// P (lambda / 4 pi)^2, the factor in front of every squared field norm.
  double power_scale() const;
  void validate() const;
};

struct PathComponent {
  double amplitude{0};  ///< beta sqrt(Gr Gt) / r (1/m)
  double phase{0};      ///< 2 pi (r_path - r_direct) / lambda (rad)
  Field2 field{Field2::Zero()};  ///< Gamma p for reflections, p for the direct path
};

/// P (lambda / 4 pi)^2 || sum_p amplitude e^{-j phase} field ||^2.
double received_power(std::span<const PathComponent> paths, double power, double wavelength);

/// sigma^2 must be positive.
double sinr(double signal, std::span<const double> interference, double noise);

double spectral_efficiency(double sinr_linear);

/// Everything about one transmitter -> receiver link that depends only on
/// positions and the transmitter's polarization axis.
struct LinkGeometry {
  Eigen::Vector3d transmitter;
  ImageSet<double> images;
  std::array<double, kPathCount> lengths;                    ///< r, r_1..r_6
  std::array<RayOrientation<double>, kPathCount> orientations;  ///< sources seen from the receiver
  std::array<Eigen::Vector2d, kPathCount> polarization;      ///< p, p_1..p_6
  std::size_t degenerate_polarizations{0};
  double direct_planar{0};                 ///< r'
  std::array<double, 4> wall_planar{};     ///< r'_1..r'_4

  CeilingReach ceiling_reach(double receiver_z, double body_height, const Enclosure<double>& enc) const;
};

LinkGeometry link_geometry(const Eigen::Vector3d& tx, const PolarizationOrientation<double>& polarization,
                           const Eigen::Vector3d& rx, const Enclosure<double>& enc);

/// Unit-gain, unblocked per-path terms e^{-j dphi} Gamma p / r (direct: p / r).
using PathFields = std::array<Field2, kPathCount>;
PathFields path_fields(const LinkGeometry& link, const SlabMaterial<double>& material);

/// Sum over paths of beta_p sqrt(Gr_p Gt_p) * fields_p.
Field2 combine_paths(const PathFields& fields, const BlockageState& blockage, const PathGains& gains);

/// Per-path components in the explicit (amplitude, phase, field) form.
std::array<PathComponent, kPathCount> assemble_paths(const LinkGeometry& link, const PathGains& gains,
                                                     const BlockageState& blockage,
                                                     const SlabMaterial<double>& material);

/// Intended-signal field split into the on-body direct term (without beta_0)
/// and the reflected remainder, so P_0(beta_0) costs O(1) per beta_0.
struct SignalField {
  Field2 direct{Field2::Zero()};
  Field2 reflected{Field2::Zero()};

  Field2 total(double onbody_beta) const { return onbody_beta * direct + reflected; }
  double power(double onbody_beta, const RadioConstants& radio) const {
    return radio.power_scale() * total(onbody_beta).squaredNorm();
  }
};

SignalField signal_field(const PathFields& fields, const BlockageState& blockage, const PathGains& gains);

}  // namespace wearnet
