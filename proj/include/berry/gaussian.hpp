#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace berry {

struct GaussianFit {
  double mean = 0.0;
  double sigma = 0.0;
  double p_value = 1.0;  ///< Anderson-Darling normality test, parameters estimated
  double statistic = 0.0;
  bool degenerate = false;  ///< zero spread; no test performed
};

/// Sample mean, standard deviation and an Anderson-Darling normality p-value.
/// Requires at least 20 values.
GaussianFit gaussian_check(std::span<const double> phases);

/// Upper-tail p-value of the modified A^2* statistic (D'Agostino & Stephens).
double anderson_darling_p_value(double a2_star);

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
};

/// Equal-width histogram over [min, max]; ceil(sqrt(n)) bins clamped to
/// [5, 50] unless `bins` is given.
Histogram make_histogram(std::span<const double> values, std::size_t bins = 0);

double mean(std::span<const double> values);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_stddev(std::span<const double> values);

}  // namespace berry
