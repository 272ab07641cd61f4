#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfg/errors.hpp"
#include "sfg/linearization.hpp"
#include "sfg/params.hpp"
#include "sfg/steady_state.hpp"

namespace sfg {

/// Margin threshold (absolute, units of the loss rates) below which an
/// operating point counts as unstable.
inline constexpr double kStabilityTolerance = 1e-9;

using Eigenvalues6 = std::array<cplx, 6>;

/// Orders by real part, then by imaginary part. Real parts within rounding
/// of each other count as equal, so conjugate pairs come out as (-i, +i).
inline void sort_eigenvalues(Eigenvalues6& ev) {
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  const auto close = [](cplx a, cplx b) {
    return std::abs(a.real() - b.real()) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
  };
  for (std::size_t i = 0; i < ev.size();) {
    std::size_t j = i + 1;
    while (j < ev.size() && close(ev[j - 1], ev[j])) ++j;
    std::sort(ev.begin() + i, ev.begin() + j, [](cplx a, cplx b) { return a.imag() < b.imag(); });
    i = j;
  }
}

inline Eigenvalues6 numeric_eigenvalues(const DriftMatrix& A) {
  Eigen::ComplexEigenSolver<Matrix6c> solver(A.m, /*computeEigenvectors=*/false);
  Eigenvalues6 ev;
  for (int i = 0; i < 6; ++i) ev[i] = solver.eigenvalues()[i];
  sort_eigenvalues(ev);
  return ev;
}

/// Analytic eigenvalues of the drift matrix for the symmetric cavity with a
/// real steady state, sorted by real then imaginary part.
inline Eigenvalues6 eigenvalues_symmetric(const SystemParams& p, const SteadyStateSolution& ss) {
  if (!p.is_symmetric()) throw ContractViolation("eigenvalues_symmetric requires symmetric parameters");
  if (ss.alpha1.imag() != 0.0 || ss.alpha3.imag() != 0.0 || ss.alpha1 != ss.alpha2)
    throw ContractViolation("eigenvalues_symmetric requires a real symmetric steady state");
  const double g = p.gamma1;
  const double g3 = p.gamma3;
  const double ka3 = p.kappa * ss.alpha3.real();
  const double a = ss.alpha1.real();
  const double k2a2 = p.kappa * p.kappa * (ss.alpha3.real() * ss.alpha3.real() - 8.0 * a * a);

  const cplx root_plus = std::sqrt(cplx{(g - g3) * (g - g3) + 2.0 * ka3 * (g - g3) + k2a2});
  const cplx root_minus = std::sqrt(cplx{(g - g3) * (g - g3) - 2.0 * ka3 * (g - g3) + k2a2});
  Eigenvalues6 ev = {
      cplx{g + ka3},
      cplx{g - ka3},
      0.5 * (g + g3 + ka3 + root_plus),
      0.5 * (g + g3 + ka3 - root_plus),
      0.5 * (g + g3 - ka3 + root_minus),
      0.5 * (g + g3 - ka3 - root_minus),
  };
  sort_eigenvalues(ev);
  return ev;
}

struct StabilityReport {
  Eigenvalues6 eigenvalues{};
  bool stable = false;
  double margin = 0.0;  ///< min real part over the eigenvalues
};

inline StabilityReport stability_of(const DriftMatrix& A) {
  StabilityReport r;
  r.eigenvalues = numeric_eigenvalues(A);
  r.margin = r.eigenvalues.front().real();
  for (const auto& e : r.eigenvalues) r.margin = std::min(r.margin, e.real());
  r.stable = r.margin > kStabilityTolerance;
  return r;
}

inline StabilityReport stability(const SystemParams& p, const SteadyStateSolution& ss) {
  return stability_of(drift_matrix(p, ss));
}

/// Linear stability of the classical steady state for the given parameters.
inline StabilityReport stability(const SystemParams& p) { return stability(p, solve_steady(p)); }

struct CriticalPoint {
  double alpha_c = 0.0;    ///< low-frequency amplitude at threshold
  double epsilon_c = 0.0;  ///< pump amplitude at threshold
  double alpha3_c = 0.0;   ///< sum-frequency amplitude at threshold, -gamma/kappa
};

/// Threshold of the symmetric cavity, where gamma + kappa*alpha3 reaches zero.
inline CriticalPoint critical_point(const SystemParams& p) {
  p.validate();
  if (!p.is_symmetric())
    throw ContractViolation("critical_point is only defined for symmetric loss rates and pumps");
  const double g = p.gamma1;
  const double g3 = p.gamma3;
  CriticalPoint c;
  c.alpha3_c = -g / p.kappa;
  c.epsilon_c = 2.0 * g * std::sqrt(g * g3) / p.kappa;
  c.alpha_c = c.epsilon_c / (2.0 * g);
  return c;
}

/// Stability boundary for one gamma3/gamma ratio.
struct BoundarySample {
  double gamma3_over_gamma = 0.0;
  std::optional<double> epsilon;  ///< empty when the range does not bracket the boundary
  double closed_form = 0.0;       ///< 2 gamma sqrt(gamma gamma3) / kappa
  std::string diagnostic;
};

/// Locates the stable/unstable boundary in pump amplitude by bisection on
/// the stability margin, one row per gamma3/gamma ratio.
inline std::vector<BoundarySample> stability_map(double kappa, double gamma, std::span<const double> gamma3_over_gamma,
                                                 double eps_lo, double eps_hi, double rel_precision = 1e-6) {
  if (gamma3_over_gamma.empty()) throw ContractViolation("stability_map requires a nonempty ratio grid");
  if (!std::is_sorted(gamma3_over_gamma.begin(), gamma3_over_gamma.end()) ||
      std::adjacent_find(gamma3_over_gamma.begin(), gamma3_over_gamma.end()) != gamma3_over_gamma.end())
    throw ContractViolation("stability_map requires an increasing ratio grid");
  if (!(eps_hi > eps_lo) || eps_lo < 0.0) throw ContractViolation("stability_map requires 0 <= eps_lo < eps_hi");

  std::vector<BoundarySample> rows;
  rows.reserve(gamma3_over_gamma.size());
  for (double ratio : gamma3_over_gamma) {
    BoundarySample row;
    row.gamma3_over_gamma = ratio;
    const auto margin_at = [&](double eps) {
      return stability(SystemParams::symmetric(kappa, gamma, ratio * gamma, eps)).margin;
    };
    row.closed_form = critical_point(SystemParams::symmetric(kappa, gamma, ratio * gamma, 0.0)).epsilon_c;

    double lo = eps_lo, hi = eps_hi;
    const double m_lo = margin_at(lo);
    const double m_hi = margin_at(hi);
    if (!(m_lo > kStabilityTolerance) || m_hi > kStabilityTolerance) {
      row.diagnostic = m_lo > kStabilityTolerance ? "entire range stable" : "range does not start stable";
      rows.push_back(std::move(row));
      continue;
    }
    while (hi - lo > rel_precision * hi) {
      const double mid = 0.5 * (lo + hi);
      (margin_at(mid) > kStabilityTolerance ? lo : hi) = mid;
    }
    row.epsilon = 0.5 * (lo + hi);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace sfg
