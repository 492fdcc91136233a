#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace wearnet {

struct MeanEstimate {
  double mean{0};
  double half_width{0};  ///< 95% normal-approximation confidence half-width
  std::size_t count{0};
};

/// Sample mean and 95% half-width (1.96 s / sqrt(n)); needs >= 2 samples.
MeanEstimate mean_estimate(std::span<const double> samples);

/// Mean of log2(1 + SINR) over linear SINR samples.
MeanEstimate mean_spectral_efficiency(std::span<const double> sinr_linear);

/// Empirical CDF level of the i-th sorted sample (0-based): (i + 1) / n.
std::vector<double> ecdf_levels(std::size_t n);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|; inputs need not
/// be sorted.
double ks_distance(std::vector<double> a, std::vector<double> b);

/// Linear-interpolated quantile (type 7) of unsorted samples, q in [0, 1].
double quantile(std::vector<double> samples, double q);
inline double median(std::vector<double> samples) { return quantile(std::move(samples), 0.5); }

}  // namespace wearnet
