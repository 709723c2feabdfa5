#include "berry/evolve.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Geometry>

namespace berry {

namespace {

constexpr double kMagnusWeight = 0.14433756729740643;  // sqrt(3) / 12

}  // namespace

Unitary2 step_unitary(const Eigen::Vector3d& b, double dt) {
  const double magnitude = b.norm();
  Unitary2 u;
  if (magnitude == 0.0) return u;
  const double half_angle = 0.5 * magnitude * dt;
  const double c = std::cos(half_angle);
  const double s = std::sin(half_angle) / magnitude;
  const cplx i{0.0, 1.0};
  // -i s (b . sigma), with sigma_x, sigma_y, sigma_z in the {|0>, |1>} basis.
  u.m(0, 0) = cplx{c, -s * b.z()};
  u.m(1, 1) = cplx{c, s * b.z()};
  u.m(0, 1) = -i * s * cplx{b.x(), -b.y()};
  u.m(1, 0) = -i * s * cplx{b.x(), b.y()};
  return u;
}

Unitary2 rotation_x(double angle) { return step_unitary({1.0, 0.0, 0.0}, angle); }
Unitary2 rotation_y(double angle) { return step_unitary({0.0, 1.0, 0.0}, angle); }

Eigen::Vector3d magnus_field(const Eigen::Vector3d& low, const Eigen::Vector3d& high, double dt) {
  return 0.5 * (low + high) - kMagnusWeight * dt * low.cross(high);
}

QubitState propagate(const FieldTrace& trace, QubitState initial) {
  if (trace.samples.size() % 2 != 0) {
    throw std::invalid_argument("propagate: field trace must hold two samples per step");
  }
  const double dt = trace.dt;
  cplx a0 = initial.amp0;
  cplx a1 = initial.amp1;
  for (std::size_t k = 0; k + 1 < trace.samples.size(); k += 2) {
    const Eigen::Vector3d b = magnus_field(trace.samples[k], trace.samples[k + 1], dt);
    const double magnitude = b.norm();
    if (magnitude == 0.0) continue;
    const double half_angle = 0.5 * magnitude * dt;
    const double c = std::cos(half_angle);
    const double s = std::sin(half_angle) / magnitude;
    // U = [[c - i s bz, -i s (bx - i by)], [-i s (bx + i by), c + i s bz]]
    const cplx u00{c, -s * b.z()};
    const cplx u11{c, s * b.z()};
    const cplx u01{-s * b.y(), -s * b.x()};
    const cplx u10{s * b.y(), -s * b.x()};
    const cplx n0 = u00 * a0 + u01 * a1;
    const cplx n1 = u10 * a0 + u11 * a1;
    a0 = n0;
    a1 = n1;
  }
  return {a0, a1};
}

BlochVector bloch_expectations(const QubitState& state) {
  const cplx coherence = std::conj(state.amp0) * state.amp1;
  return {2.0 * coherence.real(), 2.0 * coherence.imag(),
          std::norm(state.amp0) - std::norm(state.amp1)};
}

}  // namespace berry
