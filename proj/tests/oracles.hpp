// Independent reference computations shared by the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

/// Composite Gauss-Legendre rule for f over [a, b] with `panels` panels.
template <class F>
double integrate(F&& f, double a, double b, int panels, int order = 20) {
  static thread_local std::pair<std::vector<double>, std::vector<double>> rule;
  if (static_cast<int>(rule.first.size()) != order) rule = gauss_legendre(order);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double part = 0.0;
    for (int i = 0; i < order; ++i) part += rule.second[i] * f(mid + 0.5 * h * rule.first[i]);
    total += 0.5 * h * part;
  }
  return total;
}

/// Brute-force double integral of P exp(-rate |t - t'|) over [0, tau]^2.
/// The kink on the diagonal is avoided by integrating the lower triangle
/// and doubling; panels are no wider than the correlation time.
inline double ou_double_integral(double power, double rate, double tau) {
  const int panels = std::max(4, static_cast<int>(std::ceil(rate * tau)) + 4);
  auto inner = [&](double t) {
    const int inner_panels = std::max(2, static_cast<int>(std::ceil(rate * t)) + 2);
    return integrate([&](double u) { return std::exp(-rate * (t - u)); }, 0.0, t, inner_panels);
  };
  return 2.0 * power * integrate(inner, 0.0, tau, panels);
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
