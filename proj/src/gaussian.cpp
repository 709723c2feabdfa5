#include "berry/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "berry/errors.hpp"

namespace berry {

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double anderson_darling_p_value(double a) {
  double p;
  if (a >= 0.6) {
    p = std::exp(1.2937 - 5.709 * a + 0.0186 * a * a);
  } else if (a >= 0.34) {
    p = std::exp(0.9177 - 4.279 * a - 1.38 * a * a);
  } else if (a >= 0.2) {
    p = 1.0 - std::exp(-8.318 + 42.796 * a - 59.938 * a * a);
  } else {
    p = 1.0 - std::exp(-13.436 + 101.14 * a - 223.73 * a * a);
  }
  return std::clamp(p, 0.0, 1.0);
}

GaussianFit gaussian_check(std::span<const double> phases) {
  const std::size_t n = phases.size();
  if (n < 20) {
    throw InsufficientDataError("gaussian_check: need at least 20 values, got " +
                                std::to_string(n));
  }
  GaussianFit fit;
  fit.mean = mean(phases);
  fit.sigma = sample_stddev(phases);
  if (!(fit.sigma > 0.0)) {
    fit.sigma = 0.0;
    fit.degenerate = true;
    fit.p_value = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }

  std::vector<double> z(phases.begin(), phases.end());
  std::sort(z.begin(), z.end());
  for (double& v : z) v = (v - fit.mean) / fit.sigma;

  // log Phi(z) and log(1 - Phi(z)) through erfc to keep the tails accurate.
  auto log_cdf = [](double x) { return std::log(0.5 * std::erfc(-x / std::sqrt(2.0))); };
  auto log_sf = [](double x) { return std::log(0.5 * std::erfc(x / std::sqrt(2.0))); };

  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double weight = 2.0 * static_cast<double>(i) + 1.0;
    sum += weight * (log_cdf(z[i]) + log_sf(z[n - 1 - i]));
  }
  const double nd = static_cast<double>(n);
  const double a2 = -nd - sum / nd;
  fit.statistic = a2 * (1.0 + 0.75 / nd + 2.25 / (nd * nd));
  fit.p_value = anderson_darling_p_value(fit.statistic);
  return fit;
}

Histogram make_histogram(std::span<const double> values, std::size_t bins) {
  Histogram h;
  if (values.empty()) return h;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (hi == lo) {
    h.edges = {lo - 0.5, lo + 0.5};
    h.counts = {values.size()};
    return h;
  }
  if (bins == 0) {
    bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(values.size()))));
    bins = std::clamp<std::size_t>(bins, 5, 50);
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto index = static_cast<std::size_t>((v - lo) / width);
    h.counts[std::min(index, bins - 1)] += 1;
  }
  return h;
}

}  // namespace berry
