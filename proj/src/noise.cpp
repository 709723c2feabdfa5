#include "berry/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "berry/random.hpp"

namespace berry {

std::string_view to_string(NoiseKind kind) {
  return kind == NoiseKind::radial ? "radial" : "angular";
}

NoiseKind parse_noise_kind(std::string_view text) {
  if (text == "radial") return NoiseKind::radial;
  if (text == "angular") return NoiseKind::angular;
  throw std::invalid_argument("unknown noise kind '" + std::string(text) + "'");
}

namespace {

void check_params(const NoiseParams& p) {
  if (!std::isfinite(p.power) || p.power < 0.0) {
    throw std::invalid_argument("noise power must be finite and >= 0");
  }
  if (!std::isfinite(p.rate) || p.rate <= 0.0) {
    throw std::invalid_argument("noise rate must be finite and > 0");
  }
}

}  // namespace

double ou_decay_factor(double rate, double dt) { return std::exp(-rate * dt); }

NoiseTrace ou_generate(const NoiseParams& params, double dt, std::size_t n,
                       std::uint64_t master_seed) {
  check_params(params);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("ou_generate: dt must be > 0");
  if (n == 0) throw std::invalid_argument("ou_generate: n must be >= 1");

  NoiseTrace trace{std::vector<double>(n, 0.0), dt, params};
  if (params.power == 0.0) return trace;

  RandomStream rng(master_seed, params.stream_id, StreamDomain::noise);
  const double decay = ou_decay_factor(params.rate, dt);
  // 1 - a^2 = -expm1(-2 rate dt), exact for small rate * dt.
  const double kick = std::sqrt(params.power * -std::expm1(-2.0 * params.rate * dt));

  double x = std::sqrt(params.power) * rng.normal();
  trace.samples[0] = x;
  for (std::size_t k = 1; k < n; ++k) {
    x = decay * x + kick * rng.normal();
    trace.samples[k] = x;
  }
  return trace;
}

double ou_autocovariance(const NoiseParams& params, double lag) {
  return params.power * std::exp(-params.rate * std::abs(lag));
}

}  // namespace berry
