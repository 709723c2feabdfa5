#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

#include "berry/ensemble.hpp"
#include "berry/errors.hpp"
#include "berry/theory.hpp"
#include "berry/units.hpp"

using namespace berry;
using units::kPi;

namespace {

EnsembleConfig radial_config(std::size_t n) {
  EnsembleConfig e;
  SequenceConfig& c = e.sequence;
  c.loop.delta = -units::mhz_to_rad_per_ns(50.0);
  c.loop.omega = drive_for_solid_angle(7 * kPi / 16, c.loop.delta);
  c.loop.tau = 100.0;
  c.loop.ramp_time = 50.0;
  const double rate = units::mhz_to_rad_per_ns(10.0);
  c.loop.dt = default_dt(c.loop.tau, field_magnitude(c.loop), rate);
  c.noise = NoiseModel{NoiseKind::radial, 1.0 / 15, rate};
  e.realizations = n;
  e.master_seed = 1;
  return e;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("results do not depend on the worker count") {
  for (auto kind : {SequenceKind::berry_echo, SequenceKind::dynamic_echo}) {
    EnsembleConfig e = radial_config(40);
    e.sequence.kind = kind;
    e.workers = 1;
    const auto one = run_ensemble(e);
    for (unsigned w : {2u, 8u}) {
      e.workers = w;
      const auto many = run_ensemble(e);
      REQUIRE(many.phases.size() == one.phases.size());
      for (std::size_t k = 0; k < one.phases.size(); ++k) {
        CHECK(same_bits(many.phases[k], one.phases[k]));
        CHECK(same_bits(many.xy_points[k][0], one.xy_points[k][0]));
        CHECK(same_bits(many.xy_points[k][1], one.xy_points[k][1]));
        CHECK(many.results[k].realization_id == k);
      }
      CHECK(same_bits(many.sigma, one.sigma));
      CHECK(same_bits(many.mean_phase, one.mean_phase));
      CHECK(same_bits(many.coherence, one.coherence));
    }
  }
}

TEST_CASE("single noiseless realization") {
  EnsembleConfig e = radial_config(1);
  e.sequence.noise.reset();
  const auto s = run_ensemble(e);
  CHECK(s.sigma == 0.0);
  CHECK(s.coherence == doctest::Approx(std::hypot(s.xy_points[0][0], s.xy_points[0][1])));
  CHECK(s.coherence_normalized == doctest::Approx(1.0));
  CHECK(s.mean_phase == s.reference_phase);
  CHECK_FALSE(s.gaussian_fit.has_value());
  CHECK(s.histogram.counts == std::vector<std::size_t>{1});
}

TEST_CASE("radial ensemble statistics") {
  const EnsembleConfig e = radial_config(300);
  const auto s = run_ensemble(e);
  const auto& loop = e.sequence.loop;
  const TheoryInput in{polar_angle(loop.omega, loop.delta), field_magnitude(loop), loop.tau,
                       e.sequence.noise->rate, std::pow(loop.omega / 15.0, 2)};
  const double expect = std::sqrt(variance_geometric(in));
  CHECK(std::abs(s.sigma - expect) < 3 * expect / std::sqrt(2.0 * 300));
  CHECK(std::abs(s.mean_phase - s.reference_phase) <= 3 * s.sigma / std::sqrt(300.0));
  CHECK(s.coherence <= 1 + 1e-9);
  CHECK(std::accumulate(s.histogram.counts.begin(), s.histogram.counts.end(), std::size_t{0}) ==
        300);
  REQUIRE(s.gaussian_fit.has_value());
  CHECK(s.gaussian_fit->p_value > 0.01);
  // Coherence from xy-averaging against the Gaussian phase spread.
  const double predicted = coherence_from_sigma(s.sigma, 4) * s.mean_radius;
  CHECK(s.coherence == doctest::Approx(predicted).epsilon(0.05));
  CHECK_FALSE(s.saturated);
}

TEST_CASE("failures carry the lowest realization id") {
  // Two shots per quadrature: some realizations read x = y = 0 exactly.
  EnsembleConfig e = radial_config(200);
  e.sequence.shots = 2;
  std::uint64_t first = 0;
  try {
    e.workers = 1;
    run_ensemble(e);
    FAIL("expected a realization failure");
  } catch (const RealizationError& err) {
    first = err.realization();
    CHECK(std::string(err.what()).find(std::to_string(first)) != std::string::npos);
  }
  for (unsigned w : {2u, 8u}) {
    e.workers = w;
    try {
      run_ensemble(e);
      FAIL("expected a realization failure");
    } catch (const RealizationError& err) {
      CHECK(err.realization() == first);
    }
  }
}

TEST_CASE("shot-sampled readout stays close to the ideal expectations") {
  EnsembleConfig e = radial_config(30);
  const auto ideal = run_ensemble(e);
  e.sequence.shots = 1000000;
  const auto sampled = run_ensemble(e);
  for (std::size_t k = 0; k < 30; ++k) {
    CHECK(std::abs(sampled.xy_points[k][0] - ideal.xy_points[k][0]) < 0.005);
    CHECK(std::abs(sampled.xy_points[k][1] - ideal.xy_points[k][1]) < 0.005);
  }
}

TEST_CASE("normalize_coherence") {
  CHECK(normalize_coherence(0.8, 0.8).value == 1.0);
  CHECK(normalize_coherence(0.45, 0.9).value == doctest::Approx(0.5));
  const auto clamped = normalize_coherence(1.2, 1.0);
  CHECK(clamped.value == 1.05);
  CHECK(clamped.clamped);
  CHECK_FALSE(normalize_coherence(0.99, 1.0).clamped);
  CHECK_THROWS_AS(normalize_coherence(0.5, 0.0), DegenerateReferenceError);
  EnsembleStats a, b;
  a.coherence = 0.3;
  b.coherence = 0.6;
  CHECK(normalize_coherence(a, b).value == doctest::Approx(0.5));
}

TEST_CASE("invalid ensembles") {
  EnsembleConfig e = radial_config(0);
  CHECK_THROWS_AS(run_ensemble(e), std::invalid_argument);
}
