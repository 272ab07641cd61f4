#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "sfg/params.hpp"

namespace sfg {

/// One point of the doubled positive-P phase space. The plus variables are
/// independent of the plain amplitudes and equal their conjugates only on
/// average.
struct PhaseSpacePoint {
  cplx a1{}, a1p{}, a2{}, a2p{}, a3{}, a3p{};

  /// Coherent-state initial condition: a_jp = conj(a_j).
  static PhaseSpacePoint coherent(cplx alpha1, cplx alpha2, cplx alpha3) {
    return {alpha1, std::conj(alpha1), alpha2, std::conj(alpha2), alpha3, std::conj(alpha3)};
  }

  PhaseSpacePoint& operator+=(const PhaseSpacePoint& o) {
    a1 += o.a1, a1p += o.a1p, a2 += o.a2, a2p += o.a2p, a3 += o.a3, a3p += o.a3p;
    return *this;
  }
  friend PhaseSpacePoint operator+(PhaseSpacePoint l, const PhaseSpacePoint& r) { return l += r; }
  friend PhaseSpacePoint operator-(const PhaseSpacePoint& l, const PhaseSpacePoint& r) {
    return {l.a1 - r.a1, l.a1p - r.a1p, l.a2 - r.a2, l.a2p - r.a2p, l.a3 - r.a3, l.a3p - r.a3p};
  }
  friend PhaseSpacePoint operator*(double s, const PhaseSpacePoint& x) {
    return {s * x.a1, s * x.a1p, s * x.a2, s * x.a2p, s * x.a3, s * x.a3p};
  }

  std::array<cplx, 6> components() const { return {a1, a1p, a2, a2p, a3, a3p}; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : components()) m = std::max(m, std::abs(c));
    return m;
  }

  bool operator==(const PhaseSpacePoint&) const = default;
};

/// Components above this magnitude mark a trajectory as diverged.
inline constexpr double kDivergenceThreshold = 1e8;

inline bool is_healthy(const PhaseSpacePoint& x) {
  constexpr double limit2 = kDivergenceThreshold * kDivergenceThreshold;
  for (const auto& c : x.components()) {
    // NaN fails the comparison, so non-finite components are caught too.
    const double n2 = c.real() * c.real() + c.imag() * c.imag();
    if (!(n2 <= limit2)) return false;
  }
  return true;
}

/// Deterministic part of the positive-P equations.
inline PhaseSpacePoint drift(const SystemParams& p, const PhaseSpacePoint& x) {
  const double k = p.kappa;
  return {p.eps1 - p.gamma1 * x.a1 + k * x.a2p * x.a3,
          std::conj(p.eps1) - p.gamma1 * x.a1p + k * x.a2 * x.a3p,
          p.eps2 - p.gamma2 * x.a2 + k * x.a1p * x.a3,
          std::conj(p.eps2) - p.gamma2 * x.a2p + k * x.a1 * x.a3p,
          -p.gamma3 * x.a3 - k * x.a1 * x.a2,
          -p.gamma3 * x.a3p - k * x.a1p * x.a2p};
}

/// Stochastic increment for Wiener increments dW (already scaled by sqrt(dt)).
/// Only the low-frequency modes receive noise.
inline PhaseSpacePoint noise_increment(const SystemParams& p, const PhaseSpacePoint& x, const std::array<double, 4>& dW) {
  const cplx I{0.0, 1.0};
  const cplx b = std::sqrt(p.kappa * x.a3 / 2.0);
  const cplx bp = std::sqrt(p.kappa * x.a3p / 2.0);
  return {b * (dW[0] + I * dW[2]), bp * (dW[1] + I * dW[3]), b * (dW[0] - I * dW[2]), bp * (dW[1] - I * dW[3]),
          cplx{}, cplx{}};
}

inline constexpr int kMidpointIterations = 3;

/// Principal complex square root, branch cut on the negative real axis.
/// Written with plain arithmetic so it vectorizes across lanes.
inline void principal_sqrt(double x, double y, double& out_re, double& out_im) {
  const double r = std::sqrt(x * x + y * y);
  const double t = std::sqrt(0.5 * (r + std::abs(x)));
  const double other = t > 0.0 ? std::abs(y) / (2.0 * t) : 0.0;
  out_re = x >= 0.0 ? t : other;
  out_im = x >= 0.0 ? (t > 0.0 ? y / (2.0 * t) : 0.0) : std::copysign(t, y);
}

/// W trajectories stored component-major, real and imaginary parts apart.
template <std::size_t W>
struct PointLanes {
  static constexpr std::size_t kComponents = 6;  // a1, a1+, a2, a2+, a3, a3+
  std::array<std::array<double, W>, kComponents> re{};
  std::array<std::array<double, W>, kComponents> im{};

  void set(std::size_t lane, const PhaseSpacePoint& x) {
    const auto c = x.components();
    for (std::size_t i = 0; i < kComponents; ++i) {
      re[i][lane] = c[i].real();
      im[i][lane] = c[i].imag();
    }
  }

  PhaseSpacePoint get(std::size_t lane) const {
    const auto z = [&](std::size_t i) { return cplx{re[i][lane], im[i][lane]}; };
    return {z(0), z(1), z(2), z(3), z(4), z(5)};
  }
};

/// Semi-implicit midpoint step applied to W independent trajectories.
///
/// noise[l] holds four standard normals for lane l, scaled by sqrt(dt) here.
/// The noise matrix depends only on a3 and a3+, which carry no noise
/// themselves, so the Ito and Stratonovich forms coincide and midpoint
/// evaluation adds no spurious drift.
template <std::size_t W>
void step_lanes(const SystemParams& p, PointLanes<W>& x, double dt, const std::array<std::array<double, 4>, W>& noise) {
  const double k = p.kappa, half_k = 0.5 * p.kappa;
  const double g1 = p.gamma1, g2 = p.gamma2, g3 = p.gamma3;
  const double e1r = p.eps1.real(), e1i = p.eps1.imag(), e2r = p.eps2.real(), e2i = p.eps2.imag();
  const double sdt = std::sqrt(dt);

  std::array<std::array<double, W>, 4> dW;
  for (std::size_t l = 0; l < W; ++l)
    for (std::size_t j = 0; j < 4; ++j) dW[j][l] = noise[l][j] * sdt;

  auto mr = x.re;
  auto mi = x.im;
  for (int it = 0; it < kMidpointIterations; ++it) {
    for (std::size_t l = 0; l < W; ++l) {
      const double a1r = mr[0][l], a1i = mi[0][l], a1pr = mr[1][l], a1pi = mi[1][l];
      const double a2r = mr[2][l], a2i = mi[2][l], a2pr = mr[3][l], a2pi = mi[3][l];
      const double a3r = mr[4][l], a3i = mi[4][l], a3pr = mr[5][l], a3pi = mi[5][l];

      // Drift.
      const double d1r = e1r - g1 * a1r + k * (a2pr * a3r - a2pi * a3i);
      const double d1i = e1i - g1 * a1i + k * (a2pr * a3i + a2pi * a3r);
      const double d1pr = e1r - g1 * a1pr + k * (a2r * a3pr - a2i * a3pi);
      const double d1pi = -e1i - g1 * a1pi + k * (a2r * a3pi + a2i * a3pr);
      const double d2r = e2r - g2 * a2r + k * (a1pr * a3r - a1pi * a3i);
      const double d2i = e2i - g2 * a2i + k * (a1pr * a3i + a1pi * a3r);
      const double d2pr = e2r - g2 * a2pr + k * (a1r * a3pr - a1i * a3pi);
      const double d2pi = -e2i - g2 * a2pi + k * (a1r * a3pi + a1i * a3pr);
      const double d3r = -g3 * a3r - k * (a1r * a2r - a1i * a2i);
      const double d3i = -g3 * a3i - k * (a1r * a2i + a1i * a2r);
      const double d3pr = -g3 * a3pr - k * (a1pr * a2pr - a1pi * a2pi);
      const double d3pi = -g3 * a3pi - k * (a1pr * a2pi + a1pi * a2pr);

      // Noise amplitudes sqrt(kappa a3 / 2), sqrt(kappa a3+ / 2).
      double br, bi, bpr, bpi;
      principal_sqrt(half_k * a3r, half_k * a3i, br, bi);
      principal_sqrt(half_k * a3pr, half_k * a3pi, bpr, bpi);
      const double w0 = dW[0][l], w1 = dW[1][l], w2 = dW[2][l], w3 = dW[3][l];
      // b (w0 + i w2), bp (w1 + i w3), b (w0 - i w2), bp (w1 - i w3)
      const double n1r = br * w0 - bi * w2, n1i = bi * w0 + br * w2;
      const double n1pr = bpr * w1 - bpi * w3, n1pi = bpi * w1 + bpr * w3;
      const double n2r = br * w0 + bi * w2, n2i = bi * w0 - br * w2;
      const double n2pr = bpr * w1 + bpi * w3, n2pi = bpi * w1 - bpr * w3;

      mr[0][l] = x.re[0][l] + 0.5 * (dt * d1r + n1r);
      mi[0][l] = x.im[0][l] + 0.5 * (dt * d1i + n1i);
      mr[1][l] = x.re[1][l] + 0.5 * (dt * d1pr + n1pr);
      mi[1][l] = x.im[1][l] + 0.5 * (dt * d1pi + n1pi);
      mr[2][l] = x.re[2][l] + 0.5 * (dt * d2r + n2r);
      mi[2][l] = x.im[2][l] + 0.5 * (dt * d2i + n2i);
      mr[3][l] = x.re[3][l] + 0.5 * (dt * d2pr + n2pr);
      mi[3][l] = x.im[3][l] + 0.5 * (dt * d2pi + n2pi);
      mr[4][l] = x.re[4][l] + 0.5 * (dt * d3r);
      mi[4][l] = x.im[4][l] + 0.5 * (dt * d3i);
      mr[5][l] = x.re[5][l] + 0.5 * (dt * d3pr);
      mi[5][l] = x.im[5][l] + 0.5 * (dt * d3pi);
    }
  }
  for (std::size_t c = 0; c < 6; ++c)
    for (std::size_t l = 0; l < W; ++l) {
      x.re[c][l] = 2.0 * mr[c][l] - x.re[c][l];
      x.im[c][l] = 2.0 * mi[c][l] - x.im[c][l];
    }
}

/// One semi-implicit midpoint step of length dt for a single trajectory.
/// `noise` holds four standard normals.
inline PhaseSpacePoint step(const SystemParams& p, const PhaseSpacePoint& x, double dt, const std::array<double, 4>& noise) {
  PointLanes<1> lanes;
  lanes.set(0, x);
  step_lanes<1>(p, lanes, dt, {noise});
  return lanes.get(0);
}

}  // namespace sfg
