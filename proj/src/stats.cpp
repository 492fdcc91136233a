#include "wearnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wearnet {

MeanEstimate mean_estimate(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("mean estimate needs at least 2 samples");
  const double n = static_cast<double>(samples.size());
  double sum = 0;
  for (double x : samples) sum += x;
  const double mean = sum / n;
  double ss = 0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1));
  return {mean, 1.959963984540054 * sd / std::sqrt(n), samples.size()};
}

MeanEstimate mean_spectral_efficiency(std::span<const double> sinr_linear) {
  std::vector<double> se(sinr_linear.size());
  std::transform(sinr_linear.begin(), sinr_linear.end(), se.begin(), [](double s) {
    if (s < 0) throw std::invalid_argument("SINR must be >= 0");
    return std::log2(1 + s);
  });
  return mean_estimate(se);
}

std::vector<double> ecdf_levels(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(i + 1) / static_cast<double>(n);
  return out;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS distance needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double quantile(std::vector<double> samples, double q) {
  if (samples.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(q >= 0 && q <= 1)) throw std::invalid_argument("quantile level must lie in [0, 1]");
  std::sort(samples.begin(), samples.end());
  const double h = q * static_cast<double>(samples.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, samples.size() - 1);
  return samples[lo] + (h - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
}

}  // namespace wearnet
