#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include "sfg/errors.hpp"
#include "sfg/params.hpp"

namespace sfg {

enum class SteadyStateMethod { closed_form_symmetric, numeric_general };

/// Classical fixed point of the driven cavity (noise terms dropped).
struct SteadyStateSolution {
  cplx alpha1{};
  cplx alpha2{};
  cplx alpha3{};
  double residual = 0.0;  ///< max |rhs| over the three fixed-point equations
  SteadyStateMethod method = SteadyStateMethod::numeric_general;
  std::vector<cplx> cubic_roots;  ///< all roots of the cubic (closed form only)
  int iterations = 0;
};

/// Right-hand sides of the noise-free cavity equations with the plus
/// variables set to the complex conjugates.
inline std::array<cplx, 3> fixed_point_rhs(const SystemParams& p, cplx a1, cplx a2, cplx a3) {
  return {p.eps1 - p.gamma1 * a1 + p.kappa * std::conj(a2) * a3,
          p.eps2 - p.gamma2 * a2 + p.kappa * std::conj(a1) * a3,
          -p.gamma3 * a3 - p.kappa * a1 * a2};
}

inline double fixed_point_residual(const SystemParams& p, cplx a1, cplx a2, cplx a3) {
  const auto f = fixed_point_rhs(p, a1, a2, a3);
  return std::max({std::abs(f[0]), std::abs(f[1]), std::abs(f[2])});
}

inline constexpr double kSteadyResidualTolerance = 1e-10;

namespace detail {

// kappa^2 g3 x^3 - 2 g g3 kappa x^2 + g^2 g3 x + kappa eps^2
struct SymmetricCubic {
  double c3, c2, c1, c0;

  SymmetricCubic(double kappa, double g, double g3, double eps)
      : c3(kappa * kappa * g3), c2(-2.0 * g * g3 * kappa), c1(g * g * g3), c0(kappa * eps * eps) {}

  double operator()(double x) const { return ((c3 * x + c2) * x + c1) * x + c0; }
  double derivative(double x) const { return (3.0 * c3 * x + 2.0 * c2) * x + c1; }

  /// Remaining two roots after dividing out the known root r.
  std::array<cplx, 2> deflate(double r) const {
    const double b = c2 + c3 * r;
    const double c = c1 + b * r;
    const cplx disc = std::sqrt(cplx{b * b - 4.0 * c3 * c, 0.0});
    return {(-b + disc) / (2.0 * c3), (-b - disc) / (2.0 * c3)};
  }
};

// Cardano-form real root for the symmetric cavity, written in the shape
// alpha3 = [4g/k + 16^(1/3) g^2 g3 / xi + 2^(2/3) xi / (g3 k^2)] / 6.
inline double closed_form_alpha3(double kappa, double g, double g3, double eps) {
  const double k2 = kappa * kappa;
  const double k3 = k2 * kappa;
  const double k5 = k3 * k2;
  const double k8 = k5 * k3;
  const double e2 = eps * eps;
  const double g3sq = g3 * g3;
  const double inner = 27.0 * g3sq * g3sq * k8 * e2 * (27.0 * k2 * e2 + 4.0 * g3 * g * g * g);
  const double base = -2.0 * g * g * g * g3sq * g3 * k3 - 27.0 * g3sq * k5 * e2 + std::sqrt(inner);
  const double xi = std::cbrt(base);
  return (4.0 * g / kappa + std::cbrt(16.0) * g * g * g3 / xi + std::cbrt(4.0) * xi / (g3 * k2)) / 6.0;
}

}  // namespace detail

/// Closed-form steady state for gamma1 == gamma2 and equal real pumps.
///
/// The sum-frequency amplitude is the nonpositive real root of the cubic
/// kappa^2 g3 a^3 - 2 g g3 kappa a^2 + g^2 g3 a + kappa eps^2 = 0, and the
/// low-frequency amplitudes follow from a = eps / (g - kappa a3). Every
/// candidate is checked against the original fixed-point equations.
inline SteadyStateSolution solve_steady_symmetric(const SystemParams& p) {
  p.validate();
  if (!p.is_symmetric()) throw ContractViolation("solve_steady_symmetric requires gamma1 == gamma2 and eps1 == eps2");
  if (p.eps1.imag() != 0.0 || p.eps1.real() < 0.0)
    throw ContractViolation("solve_steady_symmetric requires a real, nonnegative pump");
  if (!(p.gamma1 > 0.0) || !(p.gamma3 > 0.0)) throw ContractViolation("solve_steady_symmetric requires gamma > 0 and gamma3 > 0");

  const double kappa = p.kappa;
  const double g = p.gamma1;
  const double g3 = p.gamma3;
  const double eps = p.eps1.real();

  SteadyStateSolution out;
  out.method = SteadyStateMethod::closed_form_symmetric;
  if (eps == 0.0) {
    out.cubic_roots = {cplx{0.0}, cplx{g / kappa}, cplx{g / kappa}};
    return out;
  }

  const detail::SymmetricCubic cubic(kappa, g, g3, eps);
  double root = detail::closed_form_alpha3(kappa, g, g3, eps);
  // Newton polish of the same root; the closed form loses absolute accuracy
  // to cancellation when |alpha3| << g/kappa.
  for (int i = 0; i < 3; ++i) {
    const double d = cubic.derivative(root);
    if (d == 0.0) break;
    root -= cubic(root) / d;
  }
  const auto others = cubic.deflate(root);
  out.cubic_roots = {cplx{root}, others[0], others[1]};

  std::vector<double> real_roots{root};
  for (const auto& r : others)
    if (std::abs(r.imag()) <= 1e-9 * std::max(1.0, std::abs(r))) real_roots.push_back(r.real());

  // Prefer a root inside (-g/kappa, 0]; otherwise take the nonpositive one.
  const auto residual_of = [&](double a3) {
    const double a = eps / (g - kappa * a3);
    return fixed_point_residual(p, cplx{a}, cplx{a}, cplx{a3});
  };
  double best = std::numeric_limits<double>::quiet_NaN();
  for (double r : real_roots)
    if (r > -g / kappa && r <= 0.0 && residual_of(r) < kSteadyResidualTolerance) best = r;
  if (std::isnan(best))
    for (double r : real_roots)
      if (r <= 0.0 && residual_of(r) < kSteadyResidualTolerance) best = r;
  if (std::isnan(best)) {
    std::ostringstream msg;
    msg << "no cubic root satisfies the fixed-point equations (closed-form root " << root
        << ", residual " << residual_of(root) << ")";
    throw InternalInconsistency(msg.str(), out.cubic_roots);
  }

  const double a = eps / (g - kappa * best);
  out.alpha1 = out.alpha2 = cplx{a};
  out.alpha3 = cplx{best};
  out.residual = residual_of(best);
  return out;
}

struct SteadySolverOptions {
  int max_iterations = 10'000;
  double residual_tolerance = 1e-12;
  double step_tolerance = 1e-14;
};

namespace detail {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline Vec6 pack(cplx a1, cplx a2, cplx a3) {
  Vec6 v;
  v << a1.real(), a1.imag(), a2.real(), a2.imag(), a3.real(), a3.imag();
  return v;
}

inline std::array<cplx, 3> unpack(const Vec6& v) {
  return {cplx{v[0], v[1]}, cplx{v[2], v[3]}, cplx{v[4], v[5]}};
}

inline Vec6 rhs_real(const SystemParams& p, const Vec6& v) {
  const auto a = unpack(v);
  const auto f = fixed_point_rhs(p, a[0], a[1], a[2]);
  return pack(f[0], f[1], f[2]);
}

// Jacobian of rhs_real with respect to (Re a1, Im a1, Re a2, Im a2, Re a3, Im a3).
inline Mat6 jacobian_real(const SystemParams& p, const Vec6& v) {
  const auto a = unpack(v);
  const double k = p.kappa;
  const cplx I{0.0, 1.0};
  // d f_row / d(Re a_col), d f_row / d(Im a_col)
  const cplx d[3][3][2] = {
      {{-p.gamma1, -I * p.gamma1}, {k * a[2], -I * k * a[2]}, {k * std::conj(a[1]), I * k * std::conj(a[1])}},
      {{k * a[2], -I * k * a[2]}, {-p.gamma2, -I * p.gamma2}, {k * std::conj(a[0]), I * k * std::conj(a[0])}},
      {{-k * a[1], -I * k * a[1]}, {-k * a[0], -I * k * a[0]}, {-p.gamma3, -I * p.gamma3}},
  };
  Mat6 J;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (int part = 0; part < 2; ++part) {
        J(2 * r, 2 * c + part) = d[r][c][part].real();
        J(2 * r + 1, 2 * c + part) = d[r][c][part].imag();
      }
  return J;
}

inline double max_abs_complex(const Vec6& f) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) m = std::max(m, std::hypot(f[2 * i], f[2 * i + 1]));
  return m;
}

// Damped Newton from x toward the root of rhs for the given params.
// Returns true on convergence; x and iterations are updated in place.
inline bool newton(const SystemParams& p, Vec6& x, int& iterations, int budget, const SteadySolverOptions& opt) {
  Vec6 f = rhs_real(p, x);
  double res = max_abs_complex(f);
  for (int it = 0; it < budget; ++it) {
    if (res < opt.residual_tolerance) return true;
    ++iterations;
    const Mat6 J = jacobian_real(p, x);
    const Eigen::FullPivLU<Mat6> lu(J);
    if (!lu.isInvertible()) return false;
    const Vec6 dx = lu.solve(-f);
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
      const Vec6 trial = x + t * dx;
      const Vec6 ft = rhs_real(p, trial);
      const double rt = max_abs_complex(ft);
      if (std::isfinite(rt) && rt < res) {
        x = trial;
        f = ft;
        res = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Stalled at round-off level.
      return res < kSteadyResidualTolerance;
    }
    if (t * dx.norm() < opt.step_tolerance * (1.0 + x.norm())) return res < kSteadyResidualTolerance;
  }
  return res < opt.residual_tolerance;
}

}  // namespace detail

/// Numeric steady state for arbitrary loss rates and complex pumps.
///
/// Newton's method on the six real unknowns, continued in pump strength from
/// the empty cavity so it tracks the branch connected to vacuum. A damped
/// fixed-point iteration is the fallback.
inline SteadyStateSolution solve_steady_general(const SystemParams& p, const SteadySolverOptions& opt = {}) {
  p.validate();
  if (!(p.gamma1 > 0.0 && p.gamma2 > 0.0 && p.gamma3 > 0.0))
    throw ContractViolation("solve_steady_general requires all loss rates > 0");

  SteadyStateSolution out;
  out.method = SteadyStateMethod::numeric_general;
  if (p.eps1 == cplx{} && p.eps2 == cplx{}) return out;

  using detail::Vec6;
  Vec6 x = Vec6::Zero();
  int iterations = 0;

  // Continuation in s: solve rhs(s * eps) = 0 for s = 0 -> 1.
  double s = 0.0;
  double ds = 0.125;
  bool ok = true;
  while (s < 1.0 && iterations < opt.max_iterations) {
    const double target = std::min(1.0, s + ds);
    SystemParams stage = p;
    stage.eps1 *= target;
    stage.eps2 *= target;
    Vec6 trial = x;
    if (detail::newton(stage, trial, iterations, 50, opt)) {
      x = trial;
      s = target;
      ds = std::min(0.25, ds * 2.0);
    } else {
      ds *= 0.5;
      if (ds < 1e-6) {
        ok = false;
        break;
      }
    }
  }
  ok = ok && s >= 1.0 && detail::newton(p, x, iterations, std::max(0, opt.max_iterations - iterations), opt);

  if (!ok) {
    // Damped fixed-point fallback: a3 <- -k a1 a2 / g3, a_j <- (eps_j + k conj(a_other) a3) / g_j.
    auto a = detail::unpack(x);
    const double w = 0.2;
    while (iterations < opt.max_iterations) {
      ++iterations;
      const cplx a3 = -p.kappa * a[0] * a[1] / p.gamma3;
      const cplx a1 = (p.eps1 + p.kappa * std::conj(a[1]) * a3) / p.gamma1;
      const cplx a2 = (p.eps2 + p.kappa * std::conj(a[0]) * a3) / p.gamma2;
      a = {(1 - w) * a[0] + w * a1, (1 - w) * a[1] + w * a2, (1 - w) * a[2] + w * a3};
      if (fixed_point_residual(p, a[0], a[1], a[2]) < opt.residual_tolerance) break;
    }
    x = detail::pack(a[0], a[1], a[2]);
  }

  const auto a = detail::unpack(x);
  out.alpha1 = a[0];
  out.alpha2 = a[1];
  out.alpha3 = a[2];
  out.residual = fixed_point_residual(p, a[0], a[1], a[2]);
  out.iterations = iterations;
  if (!(out.residual < kSteadyResidualTolerance)) {
    std::ostringstream msg;
    msg << "steady-state solver did not converge within " << opt.max_iterations
        << " iterations (residual " << out.residual << ")";
    throw NoConvergence(msg.str(), {a[0], a[1], a[2]});
  }
  return out;
}

/// Closed form when the parameters allow it, numeric otherwise.
inline SteadyStateSolution solve_steady(const SystemParams& p) {
  if (p.is_symmetric() && p.eps1.imag() == 0.0 && p.eps1.real() >= 0.0 && p.gamma1 > 0.0 && p.gamma3 > 0.0)
    return solve_steady_symmetric(p);
  return solve_steady_general(p);
}

}  // namespace sfg
