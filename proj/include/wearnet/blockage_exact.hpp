#pragma once

// Deterministic body blockage on the receiver's horizontal plane.
//
// People are vertical cylinders; projected onto the receiver plane they are
// circles of diameter D. A direct or wall-reflected path is tested by
// unfolding it (phantom transmitter) and intersecting the straight planar
// segment receiver -> projected source with the body circles and, for wall
// paths, the circles mirrored across that wall. Under the chord rule a wall
// path is split at the wall: real circles are tested on the receiver side,
// mirrored circles beyond it.

#include <Eigen/Core>

#include <array>
#include <span>
#include <vector>

#include "wearnet/blockage.hpp"
#include "wearnet/geometry.hpp"

namespace wearnet {

struct BodyCircle {
  Eigen::Vector2d center;
  double diameter;
};

/// Angular sector of directions (seen from the receiver) that pass through
/// a circle.
struct BlockingCone {
  double direction;   ///< angle of the circle centre (rad)
  double half_width;  ///< arcsin(D / 2d), clamped to pi/2 when the circle overlaps the receiver
  double distance;    ///< receiver-to-centre distance d

  /// Closed interval test; cone edges count as inside.
  bool contains(double angle) const;
};

BlockingCone blocking_cone(const BodyCircle& circle, const Eigen::Vector2d& rx);
std::vector<BlockingCone> blocking_cones(std::span<const BodyCircle> circles, const Eigen::Vector2d& rx);

/// How a circle in a transmitter's direction is judged to occlude it.
enum class OcclusionRule {
  /// The planar segment receiver -> transmitter crosses the circle interior
  /// (chord of positive length). This is the exact 2-D occlusion test.
  kChord,
  /// Cone membership of the transmitter for circles whose centre is closer to
  /// the receiver than the transmitter, or the transmitter lying inside a
  /// circle (strictly, with a 1e-9 m margin).
  kCenterDistance,
};

/// Span of a blocking circle along the receiver -> transmitter segment,
/// measured as distances from the receiver. `enter` is the clearance on the
/// receiver side, `transmitter_gap` the clearance on the transmitter side.
struct BlockerSpan {
  double enter;
  double transmitter_gap;
};

/// Receiver-side and transmitter-side clearances of a circle at distance d
/// and angle xi off a link of planar length `link_length`.
BlockerSpan ceiling_clearances(double d, double xi, double link_length, double diameter);

/// True if any direct-path blocker also cuts the ceiling-reflected path.
bool ceiling_blocked(std::span<const BlockerSpan> direct_blockers, const CeilingReach& reach);

/// Body circles around one receiver with per-wall mirror images, laid out for
/// repeated path tests.
class BlockerField {
 public:
  BlockerField(const Eigen::Vector3d& rx, std::span<const Eigen::Vector2d> body_centers, double diameter,
               const Enclosure<double>& enc, OcclusionRule rule = OcclusionRule::kChord);

  /// `wall` = 0 tests the real circles; 1..4 adds that wall's images.
  bool blocked(const Eigen::Vector2d& source, int wall = 0) const;

  /// Same test, appending every blocker's span.
  bool collect(const Eigen::Vector2d& source, int wall, std::vector<BlockerSpan>& out) const;

  /// Blockage of an interfering transmitter's direct, wall, ceiling and floor
  /// paths. `images` must be the image set of `tx` w.r.t. this receiver.
  BlockageState interferer(const Eigen::Vector3d& tx, const ImageSet<double>& images, double body_height) const;

  /// Wall-path blockage of the intended transmitter; ceiling and floor
  /// reflections are clear and the direct coefficient is `onbody_beta`.
  BlockageState signal(const ImageSet<double>& images, double onbody_beta) const;

  const Eigen::Vector3d& receiver() const { return rx_; }
  OcclusionRule rule() const { return rule_; }
  std::size_t body_count() const { return real_.size(); }

 private:
  struct Circle {
    double x, y, d2;
  };
  template <typename Visit>
  bool scan(const std::vector<Circle>& circles, const Eigen::Vector2d& rel, double lo, double hi, Visit&& visit) const;
  bool scan_set(const Eigen::Vector2d& source, int wall, std::vector<BlockerSpan>* out) const;

  Eigen::Vector3d rx_;
  double radius_;
  Enclosure<double> enc_;
  OcclusionRule rule_;
  std::vector<Circle> real_;
  std::array<std::vector<Circle>, 4> images_;
};

}  // namespace wearnet
