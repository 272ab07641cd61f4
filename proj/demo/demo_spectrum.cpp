// Steady state, stability and the X3 squeezing spectrum for one pump value.
#include <cstdio>
#include <cstdlib>

#include "sfg/spectrum.hpp"

int main(int argc, char** argv) {
  const double eps = argc > 1 ? std::atof(argv[1]) : 600.0;
  const auto p = sfg::SystemParams::symmetric(0.01, 1.0, 10.0, eps);
  try {
    const auto r = sfg::compute_spectrum(p, {5.0, 11});
    std::printf("alpha = %.4f  alpha3 = %.4f  margin = %.5f\n", r.steady.alpha1.real(), r.steady.alpha3.real(),
                r.stability.margin);
    std::printf("%8s %10s %10s %10s\n", "omega", "V(X3)", "DS+", "EPR12");
    const auto v = sfg::spectral_variance(r, sfg::quad::X3);
    const auto ds = sfg::spectral_duan_simon(r, +1);
    const auto epr = sfg::spectral_epr(r, 1, 2);
    for (std::size_t i = 0; i < r.size(); ++i)
      std::printf("%8.2f %10.5f %10.5f %10.5f\n", r.omegas[i], v[i], ds[i], epr[i]);
  } catch (const sfg::UnstableOperatingPoint& e) {
    std::printf("%s\n", e.what());
    return 2;
  }
}
