// Small travelling-wave ensemble: intensities and X3 squeezing versus zeta.
#include <cmath>
#include <cstdio>

#include "sfg/ensemble.hpp"
#include "sfg/observables.hpp"

int main() {
  using namespace sfg;
  const double a0 = 1000.0 / std::sqrt(2.0);
  TrajectoryConfig cfg;
  cfg.t_max = 4.0;
  cfg.sample_stride = 1000;
  cfg.n_traj = 2000;
  const auto table = run_ensemble(SystemParams::travelling_wave(0.01), PhaseSpacePoint::coherent(a0, a0, 0.0), cfg);
  const auto n1 = mean_intensity(table, 1);
  const auto n3 = mean_intensity(table, 3);
  const auto v3 = quadrature_variance(table, QuadratureSpec::X(3));
  std::printf("%6s %12s %12s %14s\n", "zeta", "n1", "n3", "V(X3)");
  for (std::size_t k = 0; k < table.samples(); ++k)
    std::printf("%6.2f %12.1f %12.1f %8.4f+-%.4f\n", table.times[k], n1.value[k], n3.value[k], v3.value[k], v3.se[k]);
}
