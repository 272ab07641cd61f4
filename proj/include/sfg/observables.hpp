#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sfg/correlations.hpp"
#include "sfg/errors.hpp"
#include "sfg/moments.hpp"

namespace sfg {

/// Quadrature X_j(theta) = a_j e^{-i theta} + a_j^dag e^{i theta}.
struct QuadratureSpec {
  int mode = 1;
  double theta = 0.0;

  static QuadratureSpec X(int mode) { return {mode, 0.0}; }
  static QuadratureSpec Y(int mode) { return {mode, std::numbers::pi / 2}; }

  double angle() const {
    const double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta, two_pi);
    return t < 0.0 ? t + two_pi : t;
  }
};

/// A correlation measure sampled over time.
struct CorrelationSeries {
  std::string name;
  std::vector<double> times;
  std::vector<double> value;
  std::vector<double> se;
  std::optional<double> threshold;
  /// Largest |Im value| / (1e-8 + 5 SE_im) seen; <= 1 means every discarded
  /// imaginary part was within statistical noise.
  double max_imag_ratio = 0.0;

  std::size_t size() const { return value.size(); }
};

using MomentFunction = std::function<cplx(const MomentSet&)>;

/// Evaluates f on the ensemble means; standard errors come from the
/// first-order delta method applied to the batch-mean deviations.
inline CorrelationSeries evaluate_series(const MomentTable& table, const MomentFunction& f, std::string name,
                                         std::optional<double> threshold) {
  CorrelationSeries out;
  out.name = std::move(name);
  out.threshold = threshold;
  out.times = table.times;
  out.value.reserve(table.samples());
  out.se.reserve(table.samples());
  for (std::size_t k = 0; k < table.samples(); ++k) {
    const MomentSet& m = table.mean[k];
    const cplx v = f(m);
    // Central difference along each batch deviation; exact for functions
    // quadratic in the moments, first-order accurate otherwise.
    std::vector<cplx> d;
    d.reserve(table.batches());
    for (std::size_t b = 0; b < table.batches(); ++b) {
      if (table.batch_count[b] == 0) continue;
      const MomentSet delta = table.batch_mean[k][b] - m;
      d.push_back(0.5 * (f(m + delta) - f(m - delta)));
    }
    double se_re = 0.0, se_im = 0.0;
    if (d.size() > 1) {
      cplx mean{};
      for (const auto& x : d) mean += x;
      mean /= static_cast<double>(d.size());
      double ss_re = 0.0, ss_im = 0.0;
      for (const auto& x : d) {
        ss_re += (x.real() - mean.real()) * (x.real() - mean.real());
        ss_im += (x.imag() - mean.imag()) * (x.imag() - mean.imag());
      }
      const double nb = static_cast<double>(d.size());
      se_re = std::sqrt(ss_re / (nb - 1.0) / nb);
      se_im = std::sqrt(ss_im / (nb - 1.0) / nb);
    }
    if (!std::isfinite(v.real()) || !std::isfinite(se_re))
      throw UndefinedObservable(out.name + ": non-finite value at sample " + std::to_string(k));
    out.max_imag_ratio = std::max(out.max_imag_ratio, std::abs(v.imag()) / (1e-8 + 5.0 * se_im));
    out.value.push_back(v.real());
    out.se.push_back(se_re);
  }
  return out;
}

namespace moments {

inline cplx phase(double theta) { return std::polar(1.0, theta); }

inline cplx quadrature_mean(const MomentSet& m, const QuadratureSpec& q) {
  const double t = q.angle();
  return m.a(q.mode) * phase(-t) + m.ap(q.mode) * phase(t);
}

/// Stochastic covariance of the quadrature variables, with no ordering
/// correction. For j == k add 1 to obtain the physical variance.
inline cplx quadrature_covariance(const MomentSet& m, const QuadratureSpec& qj, const QuadratureSpec& qk) {
  const double tj = qj.angle(), tk = qk.angle();
  const int j = qj.mode, k = qk.mode;
  const cplx second = m.aa(j, k) * phase(-tj - tk) + m.aap(j, k) * phase(-tj + tk) + m.apa(j, k) * phase(tj - tk) +
                      m.apap(j, k) * phase(tj + tk);
  return second - quadrature_mean(m, qj) * quadrature_mean(m, qk);
}

inline cplx quadrature_variance(const MomentSet& m, const QuadratureSpec& q) {
  return 1.0 + quadrature_covariance(m, q, q);
}

/// Physical covariance matrix of (X1, Y1, X2, Y2, X3, Y3).
inline Eigen::Matrix<cplx, 6, 6> quadrature_matrix(const MomentSet& m) {
  std::array<QuadratureSpec, 6> q;
  for (int mode = 1; mode <= 3; ++mode) {
    q[quad::X(mode)] = QuadratureSpec::X(mode);
    q[quad::Y(mode)] = QuadratureSpec::Y(mode);
  }
  Eigen::Matrix<cplx, 6, 6> V;
  for (int r = 0; r < 6; ++r)
    for (int c = r; c < 6; ++c) V(r, c) = V(c, r) = quadrature_covariance(m, q[r], q[c]);
  for (int r = 0; r < 6; ++r) V(r, r) += 1.0;
  return V;
}

// Normally ordered intensity variances gain +<N> to become physical ones.
inline cplx fano_sum(const MomentSet& m) {
  const cplx mean = m.n(1) + m.n(2);
  if (std::abs(mean) < 1e-6) throw UndefinedObservable("Fano factor: mean intensity below 1e-6");
  return 1.0 + (m.n12_squared() - mean * mean) / mean;
}

inline cplx fano_mode(const MomentSet& m, int j) {
  const cplx mean = m.n(j);
  if (std::abs(mean) < 1e-6) throw UndefinedObservable("Fano factor: mean intensity below 1e-6");
  return 1.0 + (m.nn(j, j) - mean * mean) / mean;
}

}  // namespace moments

inline std::string quadrature_name(const QuadratureSpec& q) {
  if (q.angle() == 0.0) return "X" + std::to_string(q.mode);
  if (q.angle() == std::numbers::pi / 2) return "Y" + std::to_string(q.mode);
  return "X" + std::to_string(q.mode) + "(" + std::to_string(q.theta) + ")";
}

/// Mean photon number E[a_j+ a_j].
inline CorrelationSeries mean_intensity(const MomentTable& t, int j) {
  return evaluate_series(t, [j](const MomentSet& m) { return m.n(j); }, "n" + std::to_string(j), std::nullopt);
}

/// Physical quadrature variance; below 1 is squeezed.
inline CorrelationSeries quadrature_variance(const MomentTable& t, const QuadratureSpec& q) {
  return evaluate_series(t, [q](const MomentSet& m) { return moments::quadrature_variance(m, q); },
                         "V(" + quadrature_name(q) + ")", 1.0);
}

/// Covariance of two quadratures; for qj == qk this is V - 1.
inline CorrelationSeries quadrature_covariance(const MomentTable& t, const QuadratureSpec& qj, const QuadratureSpec& qk) {
  return evaluate_series(t, [qj, qk](const MomentSet& m) { return moments::quadrature_covariance(m, qj, qk); },
                         "V(" + quadrature_name(qj) + "," + quadrature_name(qk) + ")", std::nullopt);
}

/// Fano factor of N1 + N2; below 1 is sub-Poissonian.
inline CorrelationSeries fano_sum(const MomentTable& t) {
  return evaluate_series(t, moments::fano_sum, "F(N1+N2)", 1.0);
}

inline CorrelationSeries fano_mode(const MomentTable& t, int j) {
  return evaluate_series(t, [j](const MomentSet& m) { return moments::fano_mode(m, j); }, "F(N" + std::to_string(j) + ")",
                         1.0);
}

/// V(X1 +- X2) + V(Y1 -+ Y2); below 4 certifies entanglement of modes 1, 2.
inline CorrelationSeries duan_simon(const MomentTable& t, int sign) {
  return evaluate_series(
      t, [sign](const MomentSet& m) { return duan_simon_value(moments::quadrature_matrix(m), sign); },
      sign >= 0 ? "V(X1+X2)+V(Y1-Y2)" : "V(X1-X2)+V(Y1+Y2)", 4.0);
}

/// Reid product Vinf(X_j) Vinf(Y_j) inferring mode j from mode k.
inline CorrelationSeries epr_product(const MomentTable& t, int inferred_mode, int steering_mode) {
  return evaluate_series(
      t,
      [=](const MomentSet& m) { return epr_value(moments::quadrature_matrix(m), inferred_mode, steering_mode); },
      "EPR" + std::to_string(inferred_mode) + std::to_string(steering_mode), 1.0);
}

}  // namespace sfg
