#pragma once

#include <array>
#include <cmath>

#include "wearnet/antenna.hpp"
#include "wearnet/geometry.hpp"

namespace wearnet {

/// Per-path blockage coefficients of one transmitter: index 0 is the direct
/// path, 1..6 the reflection off surface i. 1 = clear, 0 = blocked. The
/// on-body direct coefficient of the intended link may take any value in
/// [0, 1].
struct BlockageState {
  std::array<double, kPathCount> coefficient{1, 1, 1, 1, 1, 1, 1};

  double direct() const noexcept { return coefficient[0]; }
  double reflected(Surface s) const noexcept { return coefficient[static_cast<std::size_t>(index_of(s))]; }
  double& operator[](std::size_t path) noexcept { return coefficient[path]; }
  double operator[](std::size_t path) const noexcept { return coefficient[path]; }
};

/// Floor reflections are blocked exactly when the direct path is.
constexpr double floor_coefficient(double direct) noexcept { return direct; }

/// Horizontal distances from the receiver (a) and from the transmitter (b)
/// within which the ceiling-reflected ray is still below head height.
struct CeilingReach {
  double receiver;
  double transmitter;
};

inline CeilingReach ceiling_reach(double receiver_z, double transmitter_z, double ceiling_incidence,
                                  double body_height, const Enclosure<double>& enc) {
  const double t = std::tan(ceiling_incidence);
  const double head = body_height - enc.height / 2;
  return {(head - receiver_z) * t, (head - transmitter_z) * t};
}

}  // namespace wearnet
