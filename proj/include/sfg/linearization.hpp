#pragma once

#include <Eigen/Dense>

#include <complex>

#include "sfg/params.hpp"
#include "sfg/steady_state.hpp"

namespace sfg {

using Matrix6c = Eigen::Matrix<cplx, 6, 6>;
using Vector6c = Eigen::Matrix<cplx, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using NoiseMatrix = Eigen::Matrix<cplx, 6, 4>;

// Fluctuation basis ordering: (d a1, d a1+, d a2, d a2+, d a3, d a3+).
namespace basis {
inline constexpr int a1 = 0, a1p = 1, a2 = 2, a2p = 3, a3 = 4, a3p = 5;
}

/// Linearized drift matrix A of d(dX) = -A dX dt + B dW about a steady state.
struct DriftMatrix {
  Matrix6c m;
};

/// D = B B^T for the linearized fluctuations.
struct DiffusionProduct {
  Matrix6c m;
};

inline DriftMatrix drift_matrix(const SystemParams& p, const SteadyStateSolution& ss) {
  const double k = p.kappa;
  const cplx a1 = ss.alpha1, a2 = ss.alpha2, a3 = ss.alpha3;
  const cplx a1p = std::conj(a1), a2p = std::conj(a2), a3p = std::conj(a3);
  namespace b = basis;
  Matrix6c A = Matrix6c::Zero();
  A(b::a1, b::a1) = A(b::a1p, b::a1p) = p.gamma1;
  A(b::a2, b::a2) = A(b::a2p, b::a2p) = p.gamma2;
  A(b::a3, b::a3) = A(b::a3p, b::a3p) = p.gamma3;

  A(b::a1, b::a2p) = -k * a3;
  A(b::a1, b::a3) = -k * a2p;
  A(b::a1p, b::a2) = -k * a3p;
  A(b::a1p, b::a3p) = -k * a2;
  A(b::a2, b::a1p) = -k * a3;
  A(b::a2, b::a3) = -k * a1p;
  A(b::a2p, b::a1) = -k * a3p;
  A(b::a2p, b::a3p) = -k * a1;
  A(b::a3, b::a1) = k * a2;
  A(b::a3, b::a2) = k * a1;
  A(b::a3p, b::a1p) = k * a2p;
  A(b::a3p, b::a2p) = k * a1p;
  return {A};
}

/// Coefficients of the four real noises in the positive-P equations,
/// evaluated at the steady state. Rows follow the fluctuation basis.
inline NoiseMatrix noise_matrix(const SystemParams& p, const SteadyStateSolution& ss) {
  const cplx I{0.0, 1.0};
  const cplx b = std::sqrt(p.kappa * ss.alpha3 / 2.0);
  const cplx bp = std::sqrt(p.kappa * std::conj(ss.alpha3) / 2.0);
  NoiseMatrix B = NoiseMatrix::Zero();
  B(basis::a1, 0) = b;
  B(basis::a1, 2) = I * b;
  B(basis::a1p, 1) = bp;
  B(basis::a1p, 3) = I * bp;
  B(basis::a2, 0) = b;
  B(basis::a2, 2) = -I * b;
  B(basis::a2p, 1) = bp;
  B(basis::a2p, 3) = -I * bp;
  return B;
}

inline DiffusionProduct diffusion_product(const SystemParams& p, const SteadyStateSolution& ss) {
  Matrix6c D = Matrix6c::Zero();
  D(basis::a1, basis::a2) = D(basis::a2, basis::a1) = p.kappa * ss.alpha3;
  D(basis::a1p, basis::a2p) = D(basis::a2p, basis::a1p) = p.kappa * std::conj(ss.alpha3);
  return {D};
}

}  // namespace sfg
