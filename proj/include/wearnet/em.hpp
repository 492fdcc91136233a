#pragma once

// Dielectric-slab reflection coefficients, surface reflection matrices and the
// 2-vector polarization abstraction.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "wearnet/geometry.hpp"
#include "wearnet/random.hpp"

namespace wearnet {

/// Homogeneous smooth plate. The refractive index uses the n' - j n''
/// convention (negative imaginary part means loss).
template <typename Scalar = double>
struct SlabMaterial {
  Scalar thickness;
  std::complex<Scalar> index;
  Scalar wavelength;

  void validate() const {
    if (!(thickness > 0)) throw std::invalid_argument("slab thickness must be > 0");
    if (!(wavelength > 0)) throw std::invalid_argument("wavelength must be > 0");
  }
};

enum class Reflectivity { kLow, kHigh };

inline std::string_view to_string(Reflectivity r) { return r == Reflectivity::kLow ? "low" : "high"; }

inline Reflectivity parse_reflectivity(std::string_view name) {
  if (name == "low") return Reflectivity::kLow;
  if (name == "high") return Reflectivity::kHigh;
  throw std::invalid_argument("reflectivity preset must be \"low\" or \"high\", got \"" + std::string(name) + "\"");
}

/// Named 60 GHz surface materials. "low" is the less reflective plate
/// (|Gamma| ~ 0.3 near normal incidence), "high" the more reflective one
/// (|Gamma| ~ 0.8).
template <typename Scalar = double>
SlabMaterial<Scalar> reflectivity_preset(Reflectivity r, Scalar wavelength = Scalar(5e-3)) {
  if (r == Reflectivity::kLow) return {Scalar(14.2e-3), {Scalar(1.85), Scalar(-0.086)}, wavelength};
  return {Scalar(8.8e-3), {Scalar(7.62), Scalar(-0.02)}, wavelength};
}

template <typename Scalar = double>
struct ReflectionPair {
  std::complex<Scalar> parallel;
  std::complex<Scalar> perpendicular;
};

/// Reflection coefficients of a finite dielectric plate at incidence `theta`.
///
/// The complex root sqrt(n^2 - sin^2 theta) takes the principal branch
/// (non-negative real part), so exp(-j 2 delta) decays through the lossy plate.
template <typename Scalar>
ReflectionPair<Scalar> slab_coefficients(Scalar theta, const SlabMaterial<Scalar>& m) {
  constexpr Scalar kSlack = Scalar(1e-12);
  if (!(theta >= -kSlack && theta <= std::numbers::pi_v<Scalar> / 2 + kSlack))
    throw std::domain_error("incidence angle must lie in [0, pi/2]");
  using C = std::complex<Scalar>;
  const C n = m.index;
  const Scalar c = std::cos(theta);
  const Scalar s = std::sin(theta);
  const C root = std::sqrt(n * n - C(s * s));
  const C delta = (Scalar(2) * std::numbers::pi_v<Scalar> * m.thickness / m.wavelength) * root;
  const C phase = std::exp(C(0, -2) * delta);

  const C g_perp = (C(c) - root) / (C(c) + root);
  const C g_par = (n * n * c - root) / (n * n * c + root);
  auto slab = [&](const C& g) { return (C(1) - phase) / (C(1) - g * g * phase) * g; };
  return {slab(g_par), slab(g_perp)};
}

template <typename Scalar>
using ReflectionMatrix = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

/// diag(Gamma_par, Gamma_perp) for walls, transposed assignment for ceiling
/// and floor: horizontal field components see Gamma_par off walls and
/// Gamma_perp off horizontal surfaces.
template <typename Scalar>
ReflectionMatrix<Scalar> reflection_matrix(Surface s, const ReflectionPair<Scalar>& pair) {
  ReflectionMatrix<Scalar> m = ReflectionMatrix<Scalar>::Zero();
  if (is_wall(s)) {
    m(0, 0) = pair.parallel;
    m(1, 1) = pair.perpendicular;
  } else {
    m(0, 0) = pair.perpendicular;
    m(1, 1) = pair.parallel;
  }
  return m;
}

template <typename Scalar>
ReflectionMatrix<Scalar> reflection_matrix(int surface_index, Scalar theta, const SlabMaterial<Scalar>& m) {
  return reflection_matrix(surface_from_index(surface_index), slab_coefficients(theta, m));
}

/// Direction of a point as seen from an observer: polar angle from +z and
/// azimuth in (-pi, pi].
template <typename Scalar = double>
struct RayOrientation {
  Scalar elevation;
  Scalar azimuth;
};

template <typename Scalar>
RayOrientation<Scalar> ray_orientation(const Vector3<Scalar>& source, const Vector3<Scalar>& observer) {
  const Vector3<Scalar> d = source - observer;
  const Scalar r = d.norm();
  if (r < Scalar(kCoincidenceTolerance)) throw std::invalid_argument("ray orientation of coincident points");
  return {detail::acos_clamped(d.z() / r), std::atan2(d.y(), d.x())};
}

/// Antenna polarization axis: azimuth in [0, 2pi), elevation in [0, pi].
template <typename Scalar = double>
struct PolarizationOrientation {
  Scalar azimuth;
  Scalar elevation;
};

template <typename Scalar = double>
struct PolarizationAngle {
  Scalar angle;      ///< in [0, pi/2]
  bool degenerate;   ///< polarization axis parallel to the ray; angle set to 0
};

/// Field orientation angle of a ray leaving a transmitter with the given
/// polarization axis, for a ray whose source is seen from the receiver at
/// `ray`. The ratio is |<e_tx, e_theta>| / |<e_tx, e_phi>| expanded in
/// closed form.
template <typename Scalar>
PolarizationAngle<Scalar> polarization_angle(const PolarizationOrientation<Scalar>& pol,
                                             const RayOrientation<Scalar>& ray) {
  const Scalar sin_pe = std::sin(pol.elevation);
  const Scalar num = std::abs(std::cos(ray.elevation) * std::cos(pol.azimuth - ray.azimuth) * sin_pe -
                              std::cos(pol.elevation) * std::sin(ray.elevation));
  const Scalar den = std::abs(sin_pe * std::sin(pol.azimuth - ray.azimuth));
  constexpr Scalar kZero = Scalar(1e-15);
  if (num < kZero && den < kZero) return {Scalar(0), true};
  return {std::atan2(num, den), false};
}

template <typename Scalar>
Vector2<Scalar> polarization_vector(Scalar angle) {
  return {std::cos(angle), std::sin(angle)};
}

/// Uniform direction on the sphere from two uniforms: azimuth 2 pi u_a,
/// elevation arccos(1 - 2 u_e) (density sin(v)/2).
template <typename Scalar = double>
PolarizationOrientation<Scalar> polarization_from_uniforms(Scalar u_azimuth, Scalar u_elevation) {
  return {Scalar(2) * std::numbers::pi_v<Scalar> * u_azimuth,
          detail::acos_clamped(Scalar(1) - Scalar(2) * u_elevation)};
}

inline PolarizationOrientation<double> sample_polarization(Rng& rng) {
  const double ua = rng.uniform();
  const double ue = rng.uniform();
  return polarization_from_uniforms(ua, ue);
}

}  // namespace wearnet
