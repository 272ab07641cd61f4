#pragma once

#include <cmath>
#include <complex>

#include "sfg/errors.hpp"

namespace sfg {

// Quadrature ordering shared by the time-domain and spectral measures.
namespace quad {
inline constexpr int X1 = 0, Y1 = 1, X2 = 2, Y2 = 3, X3 = 4, Y3 = 5;
constexpr int X(int mode) { return 2 * (mode - 1); }
constexpr int Y(int mode) { return 2 * (mode - 1) + 1; }
}  // namespace quad

/// Denominator guard for inferred variances.
inline constexpr double kInferenceGuard = 1e-9;

/// V(X1 + s X2) + V(Y1 - s Y2) for s = +1 or -1, from a quadrature
/// covariance matrix V in (X1, Y1, X2, Y2, X3, Y3) order. Separable states
/// satisfy value >= 4.
template <class Matrix>
auto duan_simon_value(const Matrix& V, int sign) {
  using namespace quad;
  const double s = sign >= 0 ? 1.0 : -1.0;
  return V(X1, X1) + V(X2, X2) + 2.0 * s * V(X1, X2) + V(Y1, Y1) + V(Y2, Y2) - 2.0 * s * V(Y1, Y2);
}

/// V(q_j) - V(q_j, q_k)^2 / V(q_k).
template <class Matrix>
auto inferred_variance(const Matrix& V, int qj, int qk) {
  if (std::abs(V(qk, qk)) < kInferenceGuard) throw UndefinedObservable("inferred variance: steering variance below guard");
  return V(qj, qj) - V(qj, qk) * V(qj, qk) / V(qk, qk);
}

/// Reid product Vinf(X_j) Vinf(Y_j) for inference of mode j from mode k.
/// Values below 1 demonstrate the EPR paradox (k steers j).
template <class Matrix>
auto epr_value(const Matrix& V, int inferred_mode, int steering_mode) {
  if (inferred_mode == steering_mode) throw ContractViolation("EPR product needs two distinct modes");
  return inferred_variance(V, quad::X(inferred_mode), quad::X(steering_mode)) *
         inferred_variance(V, quad::Y(inferred_mode), quad::Y(steering_mode));
}

}  // namespace sfg
