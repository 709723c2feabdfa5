#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace berry {

enum class NoiseKind { radial, angular };

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view text);

/// Ornstein-Uhlenbeck process definition.
///
/// `power` is the stationary variance: (rad/ns)^2 for radial noise on the
/// in-plane field magnitude, rad^2 for angular noise on the azimuth.
/// `rate` is the autocorrelation decay rate in 1/ns.
struct NoiseParams {
  double power = 0.0;
  double rate = 1.0;
  NoiseKind kind = NoiseKind::radial;
  std::uint64_t stream_id = 0;
};

/// One sampled fluctuation record, one offset per integration step.
struct NoiseTrace {
  std::vector<double> samples;
  double dt = 0.0;
  NoiseParams params;

  std::size_t size() const { return samples.size(); }
  double duration() const { return dt * static_cast<double>(samples.size()); }
};

/// Per-step decay factor exp(-rate * dt) of the exact OU transition.
double ou_decay_factor(double rate, double dt);

/// Samples a stationary OU trace with the exact discrete transition kernel
///
///   X_0 ~ N(0, P),  X_{k+1} = a X_k + sqrt(P (1 - a^2)) xi_k,  a = exp(-rate dt),
///
/// so statistics do not depend on dt. The trace is a pure function of
/// (master_seed, params.stream_id, dt, n).
NoiseTrace ou_generate(const NoiseParams& params, double dt, std::size_t n,
                       std::uint64_t master_seed);

/// Analytic autocovariance P exp(-rate |lag|).
double ou_autocovariance(const NoiseParams& params, double lag);

}  // namespace berry
