#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <vector>

#include "sfg/correlations.hpp"
#include "sfg/errors.hpp"
#include "sfg/linearization.hpp"
#include "sfg/params.hpp"
#include "sfg/stability.hpp"
#include "sfg/steady_state.hpp"

namespace sfg {

/// Frequency grid in units of gamma1.
struct FrequencyGrid {
  double omega_max = 20.0;
  std::size_t points = 801;

  std::vector<double> omegas(double gamma1) const {
    std::vector<double> w(points);
    if (points == 1) {
      w[0] = 0.0;
      return w;
    }
    // Built from the centre outwards so the grid is exactly symmetric.
    const double half = 0.5 * static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
      const double r = static_cast<double>(i) - half;
      w[i] = r < 0.0 ? -(gamma1 * omega_max * (-r / half)) : gamma1 * omega_max * (r / half);
    }
    return w;
  }

  void validate() const {
    if (!(omega_max > 0.0) || !std::isfinite(omega_max)) throw ContractViolation("invariant violated: omega_max > 0");
    if (points == 0) throw ContractViolation("invariant violated: omega_points >= 1");
  }

  bool operator==(const FrequencyGrid&) const = default;
};

inline UnstableOperatingPoint unstable_refusal(double margin) {
  std::ostringstream msg;
  msg << "operating point is unstable (min Re eigenvalue " << margin
      << "); linearized spectra are invalid here, use the stochastic dynamics instead";
  return UnstableOperatingPoint(msg.str(), margin);
}

/// Linearized fluctuation model about a stable steady state. Construction
/// checks stability once; evaluation at any real frequency is then safe.
class LinearizedCavity {
 public:
  LinearizedCavity(const DriftMatrix& A, const DiffusionProduct& D) : A_(A), D_(D), report_(stability_of(A)) {
    if (!report_.stable) throw unstable_refusal(report_.margin);
  }

  LinearizedCavity(const SystemParams& p, const SteadyStateSolution& ss)
      : LinearizedCavity(drift_matrix(p, ss), diffusion_product(p, ss)) {}

  const DriftMatrix& drift() const { return A_; }
  const DiffusionProduct& diffusion() const { return D_; }
  const StabilityReport& stability_report() const { return report_; }

  /// S(w) = (A + i w)^-1 D (A^T - i w)^-1, by two LU solves.
  Matrix6c intracavity(double omega) const {
    const cplx iw{0.0, omega};
    const Matrix6c I = Matrix6c::Identity();
    const Eigen::PartialPivLU<Matrix6c> left(A_.m + iw * I);
    const Matrix6c X = left.solve(D_.m);
    // S (A^T - i w) = X  <=>  (A - i w) S^T = X^T
    const Eigen::PartialPivLU<Matrix6c> right(A_.m - iw * I);
    return right.solve(X.transpose()).transpose();
  }

 private:
  DriftMatrix A_;
  DiffusionProduct D_;
  StabilityReport report_;
};

/// Intracavity spectral matrix; refuses unstable drift matrices.
inline Matrix6c intracavity_spectrum(const DriftMatrix& A, const DiffusionProduct& D, double omega) {
  return LinearizedCavity(A, D).intracavity(omega);
}

/// Maps fluctuation amplitudes to quadratures: X = da + da+, Y = -i(da - da+).
inline Matrix6c quadrature_transform() {
  const cplx I{0.0, 1.0};
  Matrix6c U = Matrix6c::Zero();
  for (int j = 0; j < 3; ++j) {
    U(2 * j, 2 * j) = 1.0;
    U(2 * j, 2 * j + 1) = 1.0;
    U(2 * j + 1, 2 * j) = -I;
    U(2 * j + 1, 2 * j + 1) = I;
  }
  return U;
}

struct OutputSpectrum {
  Matrix6d S_out;            ///< (X1, Y1, X2, Y2, X3, Y3), shot noise = 1
  double hermitian_asymmetry = 0.0;  ///< max |S_Q - S_Q^dag| / 2 before symmetrization
};

/// Output quadrature spectra for vacuum inputs, via input-output relations
/// with each mode coupled out at its full loss rate:
/// S_out = I + 2 G Re(sym(U S U^T)) G, G = diag(sqrt(gamma_j)).
inline OutputSpectrum output_spectra(const SystemParams& p, const Matrix6c& S) {
  const Matrix6c U = quadrature_transform();
  const Matrix6c SQ = U * S * U.transpose();
  const Matrix6c sym = 0.5 * (SQ + SQ.adjoint());
  OutputSpectrum out;
  out.hermitian_asymmetry = 0.5 * (SQ - SQ.adjoint()).cwiseAbs().maxCoeff();
  Eigen::Matrix<double, 6, 1> g;
  g << std::sqrt(p.gamma1), std::sqrt(p.gamma1), std::sqrt(p.gamma2), std::sqrt(p.gamma2), std::sqrt(p.gamma3),
      std::sqrt(p.gamma3);
  out.S_out = Matrix6d::Identity() + 2.0 * g.asDiagonal() * sym.real() * g.asDiagonal();
  return out;
}

struct SpectrumResult {
  SystemParams params;
  SteadyStateSolution steady;
  StabilityReport stability;
  std::vector<double> omegas;
  std::vector<Matrix6c> intracavity;
  std::vector<Matrix6d> output;
  double max_hermitian_asymmetry = 0.0;

  std::size_t size() const { return omegas.size(); }
};

/// Steady state, stability check and spectra over the grid, in grid order.
inline SpectrumResult compute_spectrum(const SystemParams& p, const FrequencyGrid& grid = {}) {
  SpectrumResult r;
  r.params = p;
  r.steady = solve_steady(p);
  const LinearizedCavity model(p, r.steady);
  r.stability = model.stability_report();
  r.omegas = grid.omegas(p.gamma1);
  r.intracavity.reserve(r.omegas.size());
  r.output.reserve(r.omegas.size());
  for (double w : r.omegas) {
    r.intracavity.push_back(model.intracavity(w));
    auto out = output_spectra(p, r.intracavity.back());
    r.max_hermitian_asymmetry = std::max(r.max_hermitian_asymmetry, out.hermitian_asymmetry);
    r.output.push_back(out.S_out);
  }
  return r;
}

inline std::vector<double> spectral_variance(const SpectrumResult& r, int quadrature) {
  std::vector<double> v;
  v.reserve(r.size());
  for (const auto& S : r.output) v.push_back(S(quadrature, quadrature));
  return v;
}

/// V(X1 +- X2, w) + V(Y1 -+ Y2, w) over the grid; below 4 is entangled.
inline std::vector<double> spectral_duan_simon(const SpectrumResult& r, int sign) {
  std::vector<double> v;
  v.reserve(r.size());
  for (const auto& S : r.output) v.push_back(duan_simon_value(S, sign));
  return v;
}

/// Spectral Reid product, inferring mode j from mode k; below 1 means k steers j.
inline std::vector<double> spectral_epr(const SpectrumResult& r, int inferred_mode, int steering_mode) {
  std::vector<double> v;
  v.reserve(r.size());
  for (const auto& S : r.output) v.push_back(epr_value(S, inferred_mode, steering_mode));
  return v;
}

}  // namespace sfg
