#pragma once

#include <complex>

#include <Eigen/Core>

#include "berry/path.hpp"

namespace berry {

using cplx = std::complex<double>;

struct QubitState {
  cplx amp0{1.0, 0.0};
  cplx amp1{0.0, 0.0};

  double norm_squared() const { return std::norm(amp0) + std::norm(amp1); }
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// 2x2 unitary acting on (amp0, amp1).
struct Unitary2 {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();

  QubitState operator*(const QubitState& s) const {
    return {m(0, 0) * s.amp0 + m(0, 1) * s.amp1, m(1, 0) * s.amp0 + m(1, 1) * s.amp1};
  }
  Unitary2 operator*(const Unitary2& other) const { return {m * other.m}; }
};

/// exp(-i (sigma . b) dt / 2) = cos(|b|dt/2) 1 - i sin(|b|dt/2) (b/|b|) . sigma.
Unitary2 step_unitary(const Eigen::Vector3d& b, double dt);

/// Ideal rotation exp(-i angle sigma_axis / 2) about x or y.
Unitary2 rotation_x(double angle);
Unitary2 rotation_y(double angle);

/// Constant field that reproduces the fourth-order Magnus propagator of a
/// step whose field is `low` and `high` at the two Gauss nodes:
/// (low + high)/2 - (sqrt(3)/12) dt (low x high).
Eigen::Vector3d magnus_field(const Eigen::Vector3d& low, const Eigen::Vector3d& high, double dt);

/// Ordered product of per-step exponentials applied to `initial`.
QubitState propagate(const FieldTrace& trace, QubitState initial);

BlochVector bloch_expectations(const QubitState& state);

}  // namespace berry
