#include "berry/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "berry/errors.hpp"
#include "berry/random.hpp"
#include "berry/units.hpp"

namespace berry {

std::string_view to_string(SequenceKind kind) {
  return kind == SequenceKind::berry_echo ? "berry-echo" : "dynamic-echo";
}

SequenceKind parse_sequence_kind(std::string_view text) {
  if (text == "berry-echo") return SequenceKind::berry_echo;
  if (text == "dynamic-echo") return SequenceKind::dynamic_echo;
  throw std::invalid_argument("unknown sequence kind '" + std::string(text) + "'");
}

int phase_multiplier(SequenceKind kind) { return kind == SequenceKind::berry_echo ? 4 : 1; }

NoiseParams noise_params(const SequenceConfig& config, std::uint64_t stream_id) {
  if (!config.noise) throw std::invalid_argument("noise_params: config has no noise");
  const NoiseModel& n = *config.noise;
  NoiseParams p;
  p.kind = n.kind;
  p.rate = n.rate;
  p.power = normalized_amplitude_to_power(n.amplitude, n.kind, config.loop.omega);
  p.stream_id = stream_id;
  return p;
}

std::size_t noise_trace_length(const SequenceConfig& config) {
  return step_layout(config.loop).total();
}

std::optional<NoiseTrace> realization_noise(const SequenceConfig& config,
                                            std::uint64_t stream_id,
                                            std::uint64_t master_seed) {
  if (!config.noise) return std::nullopt;
  return ou_generate(noise_params(config, stream_id), config.loop.dt,
                     noise_trace_length(config), master_seed);
}

namespace {

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Integral of |B| - |Delta| over an arm using the propagator's effective fields.
double excess_phase_integral(const FieldTrace& trace, double delta) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < trace.samples.size(); k += 2) {
    total += magnus_field(trace.samples[k], trace.samples[k + 1], trace.dt).norm();
  }
  return (total - static_cast<double>(trace.steps()) * std::abs(delta)) * trace.dt;
}

void check_noise_argument(const SequenceConfig& config, const NoiseTrace* noise_trace) {
  if (config.noise && noise_trace == nullptr) {
    throw std::invalid_argument("sequence has noise configured but no noise trace was given");
  }
  if (!config.noise && noise_trace != nullptr) {
    throw std::invalid_argument("noise trace given for a noiseless sequence");
  }
}

SequenceConfig noiseless(SequenceConfig config) {
  config.noise.reset();
  return config;
}

NoiseWindow window_of(const SequenceConfig& config) {
  return config.noise ? config.noise->window : NoiseWindow::plateau;
}

SequenceResult finish(const QubitState& state, SequenceKind kind, double reference) {
  const BlochVector v = bloch_expectations(state);
  SequenceResult r;
  r.x = v.x;
  r.y = v.y;
  r.z = v.z;
  r.total_phase = extract_phase(v.x, v.y, reference);
  r.extracted_phase = r.total_phase / phase_multiplier(kind);
  return r;
}

}  // namespace

double predicted_total_phase(const SequenceConfig& config) {
  const LoopSpec& loop = config.loop;
  validate(loop);
  if (config.kind == SequenceKind::berry_echo) {
    if (loop.omega == 0.0) return 0.0;
    const double area = solid_angle(polar_angle(loop.omega, loop.delta));
    return -loop.orientation * 2.0 * area;
  }
  const FieldTrace arm = build_field_trace(loop, nullptr, NoiseWindow::plateau, ArmShape::hold);
  return -sign_of(loop.delta) * excess_phase_integral(arm, loop.delta);
}

double reference_phase(const SequenceConfig& config) {
  const SequenceConfig clean = noiseless(config);
  return run_sequence(clean, nullptr, predicted_total_phase(clean)).total_phase;
}

SequenceResult berry_echo_run(const SequenceConfig& config, const NoiseTrace* noise_trace,
                              std::optional<double> reference) {
  if (config.kind != SequenceKind::berry_echo) {
    throw std::invalid_argument("berry_echo_run: config is not a berry-echo sequence");
  }
  check_noise_argument(config, noise_trace);
  const double ref = reference ? *reference : reference_phase(config);

  QubitState state = rotation_y(units::kPi / 2.0) * QubitState{};
  state = propagate(build_field_trace(config.loop, noise_trace, window_of(config)), state);
  state = rotation_x(units::kPi) * state;
  LoopSpec reversed = config.loop;
  reversed.orientation = -config.loop.orientation;
  state = propagate(build_field_trace(reversed, noise_trace, window_of(config)), state);
  return finish(state, config.kind, ref);
}

SequenceResult dynamic_echo_run(const SequenceConfig& config, const NoiseTrace* noise_trace,
                                std::optional<double> reference) {
  if (config.kind != SequenceKind::dynamic_echo) {
    throw std::invalid_argument("dynamic_echo_run: config is not a dynamic-echo sequence");
  }
  check_noise_argument(config, noise_trace);
  const double ref = reference ? *reference : reference_phase(config);

  const FieldTrace driven =
      build_field_trace(config.loop, noise_trace, window_of(config), ArmShape::hold);
  QubitState state = rotation_y(units::kPi / 2.0) * QubitState{};
  state = propagate(driven, state);
  state = rotation_x(units::kPi) * state;
  state = propagate(build_idle_trace(config.loop.delta, config.loop.dt, driven.steps()), state);
  return finish(state, config.kind, ref);
}

SequenceResult run_sequence(const SequenceConfig& config, const NoiseTrace* noise_trace,
                            std::optional<double> reference) {
  return config.kind == SequenceKind::berry_echo
             ? berry_echo_run(config, noise_trace, reference)
             : dynamic_echo_run(config, noise_trace, reference);
}

double extract_phase(double x, double y, double reference) {
  if (x == 0.0 && y == 0.0) {
    throw UndefinedPhaseError("extract_phase: Bloch xy-vector has zero length");
  }
  const double raw = std::atan2(y, x);
  const double windings = std::ceil((reference - raw) / units::kTwoPi - 0.5);
  return raw + units::kTwoPi * windings;
}

double sample_readout(double expectation, std::uint64_t shots, std::uint64_t stream_id,
                      std::uint64_t master_seed, unsigned draw) {
  if (shots == 0) throw std::invalid_argument("sample_readout: shots must be >= 1");
  const double p = std::clamp(0.5 * (1.0 + expectation), 0.0, 1.0);
  Philox4x32 engine(master_seed, stream_id,
                    static_cast<std::uint32_t>(StreamDomain::readout) + draw);
  std::binomial_distribution<std::uint64_t> binomial(shots, p);
  const auto successes = binomial(engine);
  return 2.0 * static_cast<double>(successes) / static_cast<double>(shots) - 1.0;
}

}  // namespace berry
