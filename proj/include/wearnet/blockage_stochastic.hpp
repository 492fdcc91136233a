#pragma once

// Closed-form Bernoulli blockage model. Body-circle centres are treated as
// uniform over the footprint minus the receiver's exclusion disk; a link is
// blocked by any body whose centre falls in the 2-D capsule (stadium) of
// radius D/2 around the link's planar projection.

#include <array>
#include <cstddef>

#include "wearnet/blockage.hpp"
#include "wearnet/random.hpp"

namespace wearnet {

/// Counts probabilities that left [0, 1] (or arcsin arguments that left
/// [-1, 1]) and had to be clamped.
struct ClampTally {
  std::size_t count{0};
};

struct BlockageParams {
  double diameter;         ///< body diameter D
  double wearable_offset;  ///< r_w, wearable distance from its body
  int interferers;         ///< K
  double footprint_area;   ///< L * W

  double exclusion_radius() const { return diameter + wearable_offset; }
  /// Footprint minus the exclusion disk.
  double free_area() const;
  /// Capsule / exclusion-disk overlap term.
  double overlap_area() const;
  /// Area of a receiver-anchored capsule of the given length outside the
  /// exclusion disk; equals length * D - overlap_area() once the capsule
  /// reaches past the disk.
  double free_capsule_area(double length) const;
  /// Union of the receiver-side capsule (outside the disk) and the
  /// transmitter-side capsule of a ceiling reflection; the two capsules are
  /// treated as disjoint.
  double ceiling_capsule_area(const CeilingReach& reach) const;
  void validate() const;
};

/// Probability that a wearer's own circle falls in the link capsule.
double p_self_body(double wearable_offset, double diameter);

/// Probability that one other body falls in the capsule of a link with
/// planar length `planar_length`.
double p_other_body(double planar_length, const BlockageParams& params, ClampTally* tally = nullptr);

/// Direct interference path: K - 1 other bodies and the two self bodies.
double p_direct_blocked(double planar_length, const BlockageParams& params, ClampTally* tally = nullptr);

/// Wall-reflected interference path, using the unfolded image distance. The
/// folded capsule is slightly smaller, so this is a close upper estimate.
double p_wall_reflection_blocked(double image_planar_length, const BlockageParams& params,
                                 ClampTally* tally = nullptr);

/// Blockage probabilities of the three independent factors of a ceiling
/// reflection (or of the auxiliary direct-path factors, see below).
struct CeilingComponents {
  double self_receiver;     ///< reference body
  double self_transmitter;  ///< interferer's own body
  double other;             ///< K - 1 other bodies

  /// P[product of the three factors = 0].
  double blocked() const { return 1 - (1 - self_receiver) * (1 - self_transmitter) * (1 - other); }
};

CeilingComponents p_ceiling_components(const CeilingReach& reach, const BlockageParams& params,
                                       ClampTally* tally = nullptr);

/// Factors of the auxiliary variable: direct path blocked given that the
/// ceiling reflection is clear.
CeilingComponents p_direct_given_ceiling_clear(const CeilingReach& reach, double planar_length,
                                               const BlockageParams& params, ClampTally* tally = nullptr);

struct DirectCeilingDraw {
  bool direct_clear;
  bool ceiling_clear;
};

/// Draws the ceiling coefficient from its three factors and an independent
/// auxiliary coefficient; the direct coefficient is their product, so a
/// blocked ceiling reflection always implies a blocked direct path.
DirectCeilingDraw sample_correlated_direct_and_ceiling(const CeilingComponents& ceiling,
                                                       const CeilingComponents& auxiliary, Rng& rng);

/// Wall reflection of the intended signal: the reference body (angular
/// self-blocking term) and all K other bodies.
double p_signal_wall_blocked(double image_planar_length, double link_planar_length, const BlockageParams& params,
                             ClampTally* tally = nullptr);

/// Planar inputs for one interfering transmitter.
struct InterfererLinkSummary {
  double direct_planar;                 ///< r'_k
  std::array<double, 4> wall_planar;    ///< r'_{i,k}, i = 1..4
  CeilingReach reach;
};

BlockageState sample_interferer_blockage(const InterfererLinkSummary& link, const BlockageParams& params, Rng& rng,
                                         ClampTally* tally = nullptr);

BlockageState sample_signal_blockage(const std::array<double, 4>& wall_planar, double link_planar,
                                     double onbody_beta, const BlockageParams& params, Rng& rng,
                                     ClampTally* tally = nullptr);

}  // namespace wearnet
