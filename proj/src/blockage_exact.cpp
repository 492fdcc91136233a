#include "wearnet/blockage_exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wearnet {

namespace {

constexpr double kPi = std::numbers::pi;
// Chords shorter than this (m) are tangencies, not occlusions.
constexpr double kChordTolerance = 1e-9;
constexpr double kInsideMargin = 1e-9;

double angle_difference(double a, double b) {
  double d = std::fmod(a - b, 2 * kPi);
  if (d > kPi) d -= 2 * kPi;
  if (d < -kPi) d += 2 * kPi;
  return d;
}

}  // namespace

bool BlockingCone::contains(double angle) const {
  return std::abs(angle_difference(angle, direction)) <= half_width;
}

BlockingCone blocking_cone(const BodyCircle& circle, const Eigen::Vector2d& rx) {
  const Eigen::Vector2d rel = circle.center - rx;
  const double d = rel.norm();
  const double ratio = d > 0 ? circle.diameter / (2 * d) : 1.0;
  return {std::atan2(rel.y(), rel.x()), std::asin(std::min(ratio, 1.0)), d};
}

std::vector<BlockingCone> blocking_cones(std::span<const BodyCircle> circles, const Eigen::Vector2d& rx) {
  std::vector<BlockingCone> out;
  out.reserve(circles.size());
  for (const auto& c : circles) out.push_back(blocking_cone(c, rx));
  return out;
}

BlockerSpan ceiling_clearances(double d, double xi, double link_length, double diameter) {
  const double along = d * std::cos(xi);
  const double s = std::clamp((2 * d / diameter) * std::sin(xi), -1.0, 1.0);
  const double half_chord = (diameter / 2) * std::cos(std::asin(s));
  return {along - half_chord, link_length - along - half_chord};
}

bool ceiling_blocked(std::span<const BlockerSpan> direct_blockers, const CeilingReach& reach) {
  return std::any_of(direct_blockers.begin(), direct_blockers.end(), [&](const BlockerSpan& b) {
    return b.enter < reach.receiver || b.transmitter_gap < reach.transmitter;
  });
}

BlockerField::BlockerField(const Eigen::Vector3d& rx, std::span<const Eigen::Vector2d> body_centers,
                           double diameter, const Enclosure<double>& enc, OcclusionRule rule)
    : rx_(rx), radius_(diameter / 2), enc_(enc), rule_(rule) {
  if (!(diameter > 0)) throw std::invalid_argument("body diameter must be > 0");
  const Eigen::Vector2d origin = rx.head<2>();
  real_.reserve(body_centers.size());
  for (auto& v : images_) v.reserve(body_centers.size());
  for (const auto& c : body_centers) {
    const Eigen::Vector2d r = c - origin;
    real_.push_back({r.x(), r.y(), r.squaredNorm()});
    for (Surface w : kWalls) {
      const Eigen::Vector2d m = image_location(c, w, enc) - origin;
      images_[static_cast<std::size_t>(index_of(w) - 1)].push_back({m.x(), m.y(), m.squaredNorm()});
    }
  }
}

template <typename Visit>
bool BlockerField::scan(const std::vector<Circle>& circles, const Eigen::Vector2d& rel, double lo, double hi,
                       Visit&& visit) const {
  const double s2 = rel.squaredNorm();
  const double s = std::sqrt(s2);
  const double ux = rel.x() / s;
  const double uy = rel.y() / s;
  const double r = radius_;
  const double r2 = r * r;
  bool any = false;
  for (const Circle& c : circles) {
    const double t = c.x * ux + c.y * uy;
    if (t < lo - r || t > hi + r) continue;
    const double perp2 = c.d2 - t * t;
    if (perp2 > r2) continue;
    const double h = std::sqrt(std::max(r2 - perp2, 0.0));
    bool hit;
    if (rule_ == OcclusionRule::kChord) {
      hit = std::min(t + h, hi) - std::max(t - h, lo) > kChordTolerance;
    } else {
      const double dx = rel.x() - c.x;
      const double dy = rel.y() - c.y;
      const double inside = r - kInsideMargin;
      hit = (t >= 0 && c.d2 < s2) || (dx * dx + dy * dy < inside * inside);
    }
    if (hit) {
      any = true;
      if (!visit(BlockerSpan{t - h, s - t - h})) return true;
    }
  }
  return any;
}

bool BlockerField::scan_set(const Eigen::Vector2d& source, int wall, std::vector<BlockerSpan>* out) const {
  if (wall < 0 || wall > 4) throw std::invalid_argument("wall index must be 0 (none) or 1..4");
  const Eigen::Vector2d rel = source - rx_.head<2>();
  if (rel.squaredNorm() < kCoincidenceTolerance * kCoincidenceTolerance)
    throw std::invalid_argument("source projection coincides with the receiver");
  auto visit = [out](const BlockerSpan& b) {
    if (!out) return false;
    out->push_back(b);
    return true;
  };
  const double s = rel.norm();
  if (wall == 0) return scan(real_, rel, 0.0, s, visit);
  // Chord rule folds the path at the wall: real circles against the in-room
  // leg, mirrored circles against the leg beyond the wall (the mirrored
  // return leg). The centre-distance rule tests whole segments.
  double fold = s;
  if (rule_ == OcclusionRule::kChord) {
    const Surface w = kWalls[static_cast<std::size_t>(wall - 1)];
    const int axis = normal_axis(w);
    const double plane = enc_.mirror_offset(w) / 2 - rx_[axis];
    fold = std::clamp(s * plane / rel[axis], 0.0, s);
  }
  const double split = rule_ == OcclusionRule::kChord ? fold : 0.0;
  bool hit = scan(real_, rel, 0.0, fold, visit);
  if (hit && !out) return true;
  hit = scan(images_[static_cast<std::size_t>(wall - 1)], rel, split, s, visit) || hit;
  return hit;
}

bool BlockerField::blocked(const Eigen::Vector2d& source, int wall) const { return scan_set(source, wall, nullptr); }

bool BlockerField::collect(const Eigen::Vector2d& source, int wall, std::vector<BlockerSpan>& out) const {
  return scan_set(source, wall, &out);
}

BlockageState BlockerField::interferer(const Eigen::Vector3d& tx, const ImageSet<double>& images,
                                       double body_height) const {
  thread_local std::vector<BlockerSpan> spans;
  spans.clear();
  BlockageState state;
  const bool direct = collect(tx.head<2>(), 0, spans);
  state[0] = direct ? 0.0 : 1.0;
  for (Surface w : kWalls)
    state[static_cast<std::size_t>(index_of(w))] = blocked(images.point(w).head<2>(), index_of(w)) ? 0.0 : 1.0;
  bool ceiling = false;
  if (direct) {
    const auto reach = ceiling_reach(rx_.z(), tx.z(), images.angle(Surface::kCeiling), body_height, enc_);
    ceiling = ceiling_blocked(spans, reach);
  }
  state[index_of(Surface::kCeiling)] = ceiling ? 0.0 : 1.0;
  state[index_of(Surface::kFloor)] = floor_coefficient(state[0]);
  return state;
}

BlockageState BlockerField::signal(const ImageSet<double>& images, double onbody_beta) const {
  BlockageState state;
  state[0] = onbody_beta;
  for (Surface w : kWalls)
    state[static_cast<std::size_t>(index_of(w))] = blocked(images.point(w).head<2>(), index_of(w)) ? 0.0 : 1.0;
  return state;
}

}  // namespace wearnet
