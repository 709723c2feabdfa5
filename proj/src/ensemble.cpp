#include "berry/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "berry/errors.hpp"

namespace berry {

namespace {

SequenceResult run_realization(const EnsembleConfig& config, std::uint64_t k, double reference) {
  const SequenceConfig& seq = config.sequence;
  const auto noise = realization_noise(seq, k, config.master_seed);
  SequenceResult r = run_sequence(seq, noise ? &*noise : nullptr, reference);
  r.realization_id = k;
  if (seq.shots) {
    r.x = sample_readout(r.x, *seq.shots, k, config.master_seed, 0);
    r.y = sample_readout(r.y, *seq.shots, k, config.master_seed, 1);
    r.z = sample_readout(r.z, *seq.shots, k, config.master_seed, 2);
    r.total_phase = extract_phase(r.x, r.y, reference);
    r.extracted_phase = r.total_phase / phase_multiplier(seq.kind);
  }
  return r;
}

// Fills results[k] for every k; the first failure by realization index wins.
void run_all(const EnsembleConfig& config, double reference, std::vector<SequenceResult>& results) {
  const std::size_t n = results.size();
  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::size_t>(config.workers == 0 ? 1 : config.workers, 1, n));

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::uint64_t error_index = std::numeric_limits<std::uint64_t>::max();

  auto work = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        results[k] = run_realization(config, k, reference);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (k < error_index) {
          error_index = k;
          error = std::make_exception_ptr(RealizationError(k, e.what()));
        }
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

EnsembleStats run_ensemble(const EnsembleConfig& config) {
  if (config.realizations == 0) throw std::invalid_argument("run_ensemble: need N >= 1");
  validate(config.sequence.loop);
  const SequenceConfig& seq = config.sequence;
  const int multiplier = phase_multiplier(seq.kind);

  SequenceConfig clean = seq;
  clean.noise.reset();
  const SequenceResult reference = run_sequence(clean, nullptr, predicted_total_phase(clean));

  EnsembleStats stats;
  stats.reference_phase = reference.extracted_phase;
  stats.reference_coherence = std::hypot(reference.x, reference.y);

  stats.results.resize(config.realizations);
  run_all(config, reference.total_phase, stats.results);

  // Aggregation in realization order keeps sums bit-identical for any worker count.
  std::complex<double> xy_sum{0.0, 0.0};
  double radius_sum = 0.0;
  stats.phases.reserve(config.realizations);
  stats.xy_points.reserve(config.realizations);
  for (const SequenceResult& r : stats.results) {
    stats.phases.push_back(r.extracted_phase);
    stats.xy_points.push_back({r.x, r.y});
    xy_sum += std::complex<double>(r.x, r.y);
    radius_sum += std::hypot(r.x, r.y);
  }
  const double n = static_cast<double>(config.realizations);
  stats.mean_phase = mean(stats.phases);
  stats.sigma = sample_stddev(stats.phases);
  stats.coherence = std::abs(xy_sum) / n;
  stats.mean_radius = radius_sum / n;
  stats.saturated = multiplier * stats.sigma > std::numbers::pi / 3.0;
  if (stats.reference_coherence > 0.0) {
    const auto normalized = normalize_coherence(stats.coherence, stats.reference_coherence);
    stats.coherence_normalized = normalized.value;
    stats.normalization_clamped = normalized.clamped;
  }
  if (config.realizations >= 20) stats.gaussian_fit = gaussian_check(stats.phases);
  stats.histogram = make_histogram(stats.phases);
  return stats;
}

NormalizedCoherence normalize_coherence(double with_noise, double without_noise) {
  if (!(without_noise > 0.0)) {
    throw DegenerateReferenceError("normalize_coherence: reference coherence is zero");
  }
  const double ratio = with_noise / without_noise;
  const double value = std::clamp(ratio, 0.0, 1.05);
  return {value, value != ratio};
}

NormalizedCoherence normalize_coherence(const EnsembleStats& with_noise,
                                        const EnsembleStats& without_noise) {
  return normalize_coherence(with_noise.coherence, without_noise.coherence);
}

}  // namespace berry
