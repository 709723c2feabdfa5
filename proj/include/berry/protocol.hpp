#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "berry/evolve.hpp"
#include "berry/noise.hpp"
#include "berry/path.hpp"

namespace berry {

enum class SequenceKind { berry_echo, dynamic_echo };

std::string_view to_string(SequenceKind kind);
SequenceKind parse_sequence_kind(std::string_view text);

/// Noise injected into a sequence, by normalized amplitude s.
struct NoiseModel {
  NoiseKind kind = NoiseKind::radial;
  double amplitude = 0.0;  ///< s_rho = sqrt(P)/B_rho or s_phi = sqrt(P)
  double rate = 0.0;       ///< 1/ns
  NoiseWindow window = NoiseWindow::plateau;
};

struct SequenceConfig {
  LoopSpec loop;
  std::optional<NoiseModel> noise;
  SequenceKind kind = SequenceKind::berry_echo;
  std::optional<std::uint64_t> shots;
};

struct SequenceResult {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double total_phase = 0.0;      ///< relative phase of the final state, unwrapped
  double extracted_phase = 0.0;  ///< total_phase / phase_multiplier
  std::uint64_t realization_id = 0;
};

/// 4 for the Berry echo (two loops, each contributing 2 gamma to the relative
/// phase), 1 for the dynamic echo (the single noisy arm's relative phase is
/// the integral of |B| - |Delta|).
int phase_multiplier(SequenceKind kind);

/// OU parameters of the configured noise for a given realization.
NoiseParams noise_params(const SequenceConfig& config, std::uint64_t stream_id);

/// Steps in one noisy arm; noise traces must have exactly this length.
std::size_t noise_trace_length(const SequenceConfig& config);

/// Noise trace for realization `stream_id`, or nullopt when the config is
/// noiseless.
std::optional<NoiseTrace> realization_noise(const SequenceConfig& config,
                                            std::uint64_t stream_id,
                                            std::uint64_t master_seed);

/// Total phase the ideal adiabatic protocol would produce; used to unwrap
/// the noiseless run.
double predicted_total_phase(const SequenceConfig& config);

/// Unwrapped total phase of the noiseless run of `config`.
double reference_phase(const SequenceConfig& config);

/// pi/2 about y, loop (+orientation) with noise, pi about x, loop with the
/// opposite orientation replaying the same noise. The phase is unwrapped
/// against `reference`, or against the noiseless run when absent.
SequenceResult berry_echo_run(const SequenceConfig& config, const NoiseTrace* noise_trace,
                              std::optional<double> reference = std::nullopt);

/// pi/2 about y, ramped static drive at phi = 0 with noise, pi about x, an
/// idle arm of equal length at the bare detuning.
SequenceResult dynamic_echo_run(const SequenceConfig& config, const NoiseTrace* noise_trace,
                                std::optional<double> reference = std::nullopt);

/// Dispatches on config.kind.
SequenceResult run_sequence(const SequenceConfig& config, const NoiseTrace* noise_trace,
                            std::optional<double> reference = std::nullopt);

/// atan2(y, x) shifted by the multiple of 2 pi that brings it within pi of
/// `reference`. An exact half-winding tie resolves to the lower candidate.
double extract_phase(double x, double y, double reference);

/// Binomial shot-noise estimate of an expectation value in [-1, 1].
double sample_readout(double expectation, std::uint64_t shots, std::uint64_t stream_id,
                      std::uint64_t master_seed, unsigned draw = 0);

}  // namespace berry
