#pragma once

// Cuboid enclosure geometry: first-order image (phantom) sources, angles of
// incidence and projections onto the receiver's horizontal plane.
//
// Coordinates are centred on the enclosure: x along the length L, y along the
// width W, z along the height H. Surfaces are numbered 1..6 as
//   1: x = +L/2   2: x = -L/2   3: y = +W/2   4: y = -W/2   5: ceiling   6: floor
// and every module shares this numbering.

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wearnet {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

enum class Surface : int {
  kWallPosX = 1,
  kWallNegX = 2,
  kWallPosY = 3,
  kWallNegY = 4,
  kCeiling = 5,
  kFloor = 6,
};

inline constexpr std::array<Surface, 6> kSurfaces{Surface::kWallPosX, Surface::kWallNegX,
                                                  Surface::kWallPosY, Surface::kWallNegY,
                                                  Surface::kCeiling,  Surface::kFloor};
inline constexpr std::array<Surface, 4> kWalls{Surface::kWallPosX, Surface::kWallNegX,
                                               Surface::kWallPosY, Surface::kWallNegY};

constexpr int index_of(Surface s) noexcept { return static_cast<int>(s); }

inline Surface surface_from_index(int i) {
  if (i < 1 || i > 6) throw std::invalid_argument("surface index must be in 1..6, got " + std::to_string(i));
  return static_cast<Surface>(i);
}

constexpr bool is_wall(Surface s) noexcept { return index_of(s) <= 4; }

/// Coordinate axis normal to a surface (0 = x, 1 = y, 2 = z).
constexpr int normal_axis(Surface s) noexcept { return (index_of(s) - 1) / 2; }

/// Minimum separation below which two points are treated as coincident (m).
inline constexpr double kCoincidenceTolerance = 1e-9;

template <typename Scalar = double>
struct Enclosure {
  Scalar length{20};
  Scalar width{4};
  Scalar height{2.5};

  void validate() const {
    if (!(length > 0)) throw std::invalid_argument("enclosure length must be > 0");
    if (!(width > 0)) throw std::invalid_argument("enclosure width must be > 0");
    if (!(height > 0)) throw std::invalid_argument("enclosure height must be > 0");
  }

  Scalar footprint_area() const { return length * width; }

  /// Strict interiority; points on a surface are rejected.
  bool contains(const Vector3<Scalar>& p) const {
    return std::abs(p.x()) < length / 2 && std::abs(p.y()) < width / 2 &&
           std::abs(p.z()) < height / 2;
  }
  bool contains_planar(const Vector2<Scalar>& p) const {
    return std::abs(p.x()) < length / 2 && std::abs(p.y()) < width / 2;
  }

  /// Signed extent that the image formulas reflect through (L, -L, W, -W, H, -H).
  Scalar mirror_offset(Surface s) const {
    switch (s) {
      case Surface::kWallPosX: return length;
      case Surface::kWallNegX: return -length;
      case Surface::kWallPosY: return width;
      case Surface::kWallNegY: return -width;
      case Surface::kCeiling: return height;
      case Surface::kFloor: return -height;
    }
    return Scalar(0);
  }
};

namespace detail {

template <typename Scalar>
void require_inside(const Enclosure<Scalar>& enc, const Vector3<Scalar>& p, const char* what) {
  if (!enc.contains(p)) throw std::invalid_argument(std::string(what) + " must lie strictly inside the enclosure");
}

template <typename Scalar>
Scalar acos_clamped(Scalar x) {
  if (x > Scalar(1)) x = Scalar(1);
  if (x < Scalar(-1)) x = Scalar(-1);
  return std::acos(x);
}

}  // namespace detail

/// Mirror image of an arbitrary point across one surface plane.
template <typename Scalar>
Vector3<Scalar> image_location(const Vector3<Scalar>& p, Surface s, const Enclosure<Scalar>& enc) {
  Vector3<Scalar> img = p;
  const int axis = normal_axis(s);
  img[axis] = enc.mirror_offset(s) - p[axis];
  return img;
}

/// Planar counterpart used for body circles; only walls are meaningful here.
template <typename Scalar>
Vector2<Scalar> image_location(const Vector2<Scalar>& p, Surface s, const Enclosure<Scalar>& enc) {
  if (!is_wall(s)) throw std::invalid_argument("planar images exist only across walls 1..4");
  Vector2<Scalar> img = p;
  const int axis = normal_axis(s);
  img[axis] = enc.mirror_offset(s) - p[axis];
  return img;
}

/// The six phantom transmitters of `tx`, indexed by surface - 1.
template <typename Scalar>
std::array<Vector3<Scalar>, 6> image_locations(const Vector3<Scalar>& tx, const Enclosure<Scalar>& enc) {
  detail::require_inside(enc, tx, "transmitter");
  std::array<Vector3<Scalar>, 6> out;
  for (Surface s : kSurfaces) out[index_of(s) - 1] = image_location(tx, s, enc);
  return out;
}

/// Phantom sources, incidence angles and reflected path lengths for one link.
template <typename Scalar>
struct ImageSet {
  std::array<Vector3<Scalar>, 6> points;
  std::array<Scalar, 6> incidence;
  std::array<Scalar, 6> lengths;

  const Vector3<Scalar>& point(Surface s) const { return points[index_of(s) - 1]; }
  Scalar angle(Surface s) const { return incidence[index_of(s) - 1]; }
  Scalar length(Surface s) const { return lengths[index_of(s) - 1]; }
};

/// Angle between the ray arriving from `image` and the normal of surface `s`.
template <typename Scalar>
Scalar incidence_angle(const Vector3<Scalar>& image, const Vector3<Scalar>& rx, Surface s) {
  const Scalar r = (image - rx).norm();
  const int axis = normal_axis(s);
  return detail::acos_clamped(std::abs(image[axis] - rx[axis]) / r);
}

template <typename Scalar>
ImageSet<Scalar> image_set(const Vector3<Scalar>& tx, const Vector3<Scalar>& rx, const Enclosure<Scalar>& enc) {
  detail::require_inside(enc, rx, "receiver");
  if ((tx - rx).norm() < Scalar(kCoincidenceTolerance))
    throw std::invalid_argument("transmitter and receiver are coincident");
  ImageSet<Scalar> set;
  set.points = image_locations(tx, enc);
  for (Surface s : kSurfaces) {
    const auto i = static_cast<std::size_t>(index_of(s) - 1);
    set.lengths[i] = (set.points[i] - rx).norm();
    set.incidence[i] = incidence_angle(set.points[i], rx, s);
  }
  return set;
}

template <typename Scalar>
std::array<Scalar, 6> incidence_angles(const Vector3<Scalar>& tx, const Vector3<Scalar>& rx,
                                       const Enclosure<Scalar>& enc) {
  return image_set(tx, rx, enc).incidence;
}

/// Image of the receiver across the ceiling; steering target for the
/// intended transmitter when the ceiling reflection is used.
template <typename Scalar>
Vector3<Scalar> receiver_ceiling_image(const Vector3<Scalar>& rx, const Enclosure<Scalar>& enc) {
  detail::require_inside(enc, rx, "receiver");
  return image_location(rx, Surface::kCeiling, enc);
}

template <typename Scalar>
struct PlanarProjection {
  Vector2<Scalar> point;
  Scalar distance;  ///< to the receiver's projection
};

template <typename Scalar>
PlanarProjection<Scalar> project_to_plane(const Vector3<Scalar>& p, const Vector3<Scalar>& rx) {
  PlanarProjection<Scalar> out{p.template head<2>(), Scalar(0)};
  out.distance = (out.point - rx.template head<2>()).norm();
  return out;
}

}  // namespace wearnet
