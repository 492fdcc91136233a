#include "wearnet/blockage_stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wearnet {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp_unit(double p, ClampTally* tally) {
  if (p < 0 || p > 1) {
    if (tally) ++tally->count;
    return std::clamp(p, 0.0, 1.0);
  }
  return p;
}

double power_or_one(double base, int exponent) { return exponent <= 0 ? 1.0 : std::pow(base, exponent); }

// Self-body factor of a ceiling reflection for a capsule of length `reach`
// ending at a wearable whose body centre sits D/2 + r_w away.
double self_ceiling(double reach, double rw, double diameter) {
  const double full = p_self_body(rw, diameter);
  if (reach >= std::sqrt(rw * (diameter + rw))) return full;
  if (reach < rw) return 0.0;
  const double arg = (reach * reach + rw * diameter + rw * rw) / (reach * (2 * rw + diameter));
  return std::acos(std::clamp(arg, -1.0, 1.0)) / kPi;
}

double self_auxiliary(double reach, double rw, double diameter) {
  const double full = p_self_body(rw, diameter);
  if (reach >= std::sqrt(rw * (diameter + rw))) return 0.0;
  if (reach < rw) return full;
  const double arg = (reach * reach + rw * diameter + rw * rw) / (reach * (2 * rw + diameter));
  const double angle = std::acos(std::clamp(arg, -1.0, 1.0));
  return (std::asin(diameter / (2 * rw + diameter)) - angle) / (kPi - angle);
}

}  // namespace

double BlockageParams::free_area() const {
  const double r = exclusion_radius();
  return footprint_area - kPi * r * r;
}

double BlockageParams::overlap_area() const {
  const double r = exclusion_radius();
  const double a = std::asin((diameter / 2) / r);
  return r * r * a + diameter * r / 2 * std::cos(a) - kPi * diameter * diameter / 8;
}

double BlockageParams::free_capsule_area(double length) const {
  const double c = diameter / 2;
  const double r = exclusion_radius();
  if (!(length > 0)) return 0.0;
  // Half-height y* at which the capsule's far edge meets the disk boundary.
  const double q = (r * r - c * c - length * length) / (2 * length);
  if (q >= c) return 0.0;
  const double y = q <= 0 ? c : std::sqrt(c * c - q * q);
  auto strip = [y](double rho) { return (y * std::sqrt(std::max(rho * rho - y * y, 0.0)) + rho * rho * std::asin(std::min(y / rho, 1.0))) / 2; };
  return 2 * (length * y + strip(c) - strip(r));
}

double BlockageParams::ceiling_capsule_area(const CeilingReach& reach) const {
  return free_capsule_area(reach.receiver) + reach.transmitter * diameter + kPi * diameter * diameter / 4;
}

void BlockageParams::validate() const {
  if (!(diameter > 0)) throw std::invalid_argument("body diameter must be > 0");
  if (!(wearable_offset >= 0)) throw std::invalid_argument("wearable offset r_w must be >= 0");
  if (interferers < 0) throw std::invalid_argument("interferer count K must be >= 0");
  if (!(free_area() > 0)) throw std::invalid_argument("exclusion disk must be smaller than the footprint");
}

double p_self_body(double wearable_offset, double diameter) {
  return std::asin(diameter / (2 * wearable_offset + diameter)) / kPi;
}

double p_other_body(double planar_length, const BlockageParams& params, ClampTally* tally) {
  return clamp_unit((planar_length * params.diameter - params.overlap_area()) / params.free_area(), tally);
}

double p_direct_blocked(double planar_length, const BlockageParams& params, ClampTally* tally) {
  const double others = power_or_one(1 - p_other_body(planar_length, params, tally), params.interferers - 1);
  const double self = 1 - p_self_body(params.wearable_offset, params.diameter);
  return 1 - others * self * self;
}

double p_wall_reflection_blocked(double image_planar_length, const BlockageParams& params, ClampTally* tally) {
  return p_direct_blocked(image_planar_length, params, tally);
}

CeilingComponents p_ceiling_components(const CeilingReach& reach, const BlockageParams& params, ClampTally* tally) {
  const double d = params.diameter;
  const double one = clamp_unit(params.ceiling_capsule_area(reach) / params.free_area(), tally);
  return {self_ceiling(reach.receiver, params.wearable_offset, d),
          self_ceiling(reach.transmitter, params.wearable_offset, d),
          1 - power_or_one(1 - one, params.interferers - 1)};
}

CeilingComponents p_direct_given_ceiling_clear(const CeilingReach& reach, double planar_length,
                                               const BlockageParams& params, ClampTally* tally) {
  const double d = params.diameter;
  const double area = params.free_area();
  const double ratio = clamp_unit((area - planar_length * d + params.overlap_area()) /
                                      (area - params.ceiling_capsule_area(reach)),
                                  tally);
  return {self_auxiliary(reach.receiver, params.wearable_offset, d),
          self_auxiliary(reach.transmitter, params.wearable_offset, d),
          1 - power_or_one(ratio, params.interferers - 1)};
}

DirectCeilingDraw sample_correlated_direct_and_ceiling(const CeilingComponents& ceiling,
                                                       const CeilingComponents& auxiliary, Rng& rng) {
  auto clear = [&rng](const CeilingComponents& c) {
    const bool a = !rng.bernoulli(c.self_receiver);
    const bool b = !rng.bernoulli(c.self_transmitter);
    const bool o = !rng.bernoulli(c.other);
    return a && b && o;
  };
  const bool ceiling_clear = clear(ceiling);
  const bool auxiliary_clear = clear(auxiliary);
  return {auxiliary_clear && ceiling_clear, ceiling_clear};
}

double p_signal_wall_blocked(double image_planar_length, double link_planar_length, const BlockageParams& params,
                             ClampTally* tally) {
  const double d = params.diameter;
  const double span = 2 * params.wearable_offset + d;
  double arg = link_planar_length / span;
  if (arg > 1) {
    if (tally) ++tally->count;
    arg = 1;
  }
  const double others = clamp_unit((image_planar_length * d - params.overlap_area()) / (2 * params.free_area()), tally);
  const double self = clamp_unit((std::asin(arg) + std::asin(d / span)) / kPi, tally);
  return 1 - power_or_one(1 - others, params.interferers) * (1 - self);
}

BlockageState sample_interferer_blockage(const InterfererLinkSummary& link, const BlockageParams& params, Rng& rng,
                                         ClampTally* tally) {
  const auto ceiling = p_ceiling_components(link.reach, params, tally);
  const auto auxiliary = p_direct_given_ceiling_clear(link.reach, link.direct_planar, params, tally);
  const auto draw = sample_correlated_direct_and_ceiling(ceiling, auxiliary, rng);
  BlockageState state;
  state[0] = draw.direct_clear ? 1.0 : 0.0;
  for (std::size_t w = 0; w < 4; ++w)
    state[w + 1] = rng.bernoulli(p_wall_reflection_blocked(link.wall_planar[w], params, tally)) ? 0.0 : 1.0;
  state[index_of(Surface::kCeiling)] = draw.ceiling_clear ? 1.0 : 0.0;
  state[index_of(Surface::kFloor)] = floor_coefficient(state[0]);
  return state;
}

BlockageState sample_signal_blockage(const std::array<double, 4>& wall_planar, double link_planar,
                                     double onbody_beta, const BlockageParams& params, Rng& rng,
                                     ClampTally* tally) {
  BlockageState state;
  state[0] = onbody_beta;
  for (std::size_t w = 0; w < 4; ++w)
    state[w + 1] = rng.bernoulli(p_signal_wall_blocked(wall_planar[w], link_planar, params, tally)) ? 0.0 : 1.0;
  return state;
}

}  // namespace wearnet
