#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "sfg/errors.hpp"

namespace sfg {

using cplx = std::complex<double>;

/// Physical parameters of the three-mode sum frequency interaction.
///
/// The cavity is driven at the two low frequencies (modes 1 and 2) and the
/// sum-frequency field (mode 3) is generated inside it. Setting all loss
/// rates and pumps to zero recovers the travelling-wave interaction.
struct SystemParams {
  double kappa = 0.01;   ///< effective chi(2) coupling
  double gamma1 = 1.0;   ///< loss rate, mode 1
  double gamma2 = 1.0;   ///< loss rate, mode 2
  double gamma3 = 10.0;  ///< loss rate, sum-frequency mode
  cplx eps1{0.0, 0.0};   ///< coherent pump, mode 1
  cplx eps2{0.0, 0.0};   ///< coherent pump, mode 2

  static SystemParams symmetric(double kappa, double gamma, double gamma3, double eps) {
    return SystemParams{kappa, gamma, gamma, gamma3, cplx{eps, 0.0}, cplx{eps, 0.0}};
  }

  static SystemParams travelling_wave(double kappa) {
    return SystemParams{kappa, 0.0, 0.0, 0.0, cplx{}, cplx{}};
  }

  double gamma(int mode) const {
    switch (mode) {
      case 1: return gamma1;
      case 2: return gamma2;
      case 3: return gamma3;
      default: throw ContractViolation("mode index must be 1, 2 or 3");
    }
  }

  bool is_travelling_wave() const {
    return gamma1 == 0.0 && gamma2 == 0.0 && gamma3 == 0.0 && eps1 == cplx{} && eps2 == cplx{};
  }

  /// True when gamma1 == gamma2 and eps1 == eps2 to relative 1e-12.
  bool is_symmetric() const {
    constexpr double rel = 1e-12;
    const auto close = [](double a, double b) {
      return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
    };
    const bool pumps_equal =
        std::abs(eps1 - eps2) <= rel * std::max({std::abs(eps1), std::abs(eps2), 1e-300});
    return close(gamma1, gamma2) && pumps_equal;
  }

  /// Throws ContractViolation naming the first broken invariant.
  void validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ContractViolation("invariant violated: kappa > 0");
    if (!(gamma1 >= 0.0) || !std::isfinite(gamma1)) throw ContractViolation("invariant violated: gamma1 >= 0");
    if (!(gamma2 >= 0.0) || !std::isfinite(gamma2)) throw ContractViolation("invariant violated: gamma2 >= 0");
    if (!(gamma3 >= 0.0) || !std::isfinite(gamma3)) throw ContractViolation("invariant violated: gamma3 >= 0");
    if (!std::isfinite(eps1.real()) || !std::isfinite(eps1.imag()) || !std::isfinite(eps2.real()) ||
        !std::isfinite(eps2.imag()))
      throw ContractViolation("invariant violated: pump amplitudes must be finite");
  }

  bool operator==(const SystemParams&) const = default;
};

}  // namespace sfg
