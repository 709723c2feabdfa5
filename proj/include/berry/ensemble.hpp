#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "berry/gaussian.hpp"
#include "berry/protocol.hpp"

namespace berry {

struct EnsembleConfig {
  SequenceConfig sequence;
  std::size_t realizations = 300;
  std::uint64_t master_seed = 1;
  unsigned workers = 1;
};

struct EnsembleStats {
  std::vector<double> phases;                  ///< extracted phases, unwrapped
  std::vector<std::array<double, 2>> xy_points;
  std::vector<SequenceResult> results;
  double mean_phase = 0.0;
  double sigma = 0.0;
  double coherence = 0.0;             ///< |mean over k of (x_k + i y_k)|
  double coherence_normalized = 0.0;  ///< coherence / reference_coherence
  bool normalization_clamped = false;
  double mean_radius = 0.0;           ///< mean over k of |(x_k, y_k)|
  double reference_phase = 0.0;       ///< extracted phase of the noiseless run
  double reference_coherence = 0.0;
  bool saturated = false;  ///< multiplier * sigma > pi / 3; unwrapped statistics unreliable
  std::optional<GaussianFit> gaussian_fit;  ///< present for N >= 20
  Histogram histogram;
};

/// Runs N realizations; realization k draws its noise from stream k. Results
/// are independent of `workers`.
EnsembleStats run_ensemble(const EnsembleConfig& config);

struct NormalizedCoherence {
  double value = 0.0;
  bool clamped = false;
};

/// Ratio of coherences clamped to [0, 1.05]; throws DegenerateReferenceError
/// for a zero reference.
NormalizedCoherence normalize_coherence(double with_noise, double without_noise);
NormalizedCoherence normalize_coherence(const EnsembleStats& with_noise,
                                        const EnsembleStats& without_noise);

}  // namespace berry
