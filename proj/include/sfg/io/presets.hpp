#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "sfg/errors.hpp"
#include "sfg/io/run_config.hpp"

namespace sfg::io {

/// Published scenario bound to its caption parameters.
struct FigurePreset {
  std::string id;
  std::string title;
  RunConfig config;
  std::vector<double> pump_family;  ///< symmetric pump values plotted together, if any
  double full_scale_trajectories = 0.0;
  std::vector<std::string> checklist;  ///< properties the figure must show
};

namespace detail {

inline RunConfig travelling_wave_base(double t_max) {
  RunConfig c;
  c.command = Command::reproduce;
  c.params = SystemParams::travelling_wave(0.01);
  c.mode = IntegrationMode::travelling_wave;
  c.alpha1_0 = c.alpha2_0 = cplx{1000.0 / std::sqrt(2.0), 0.0};
  c.alpha3_0 = cplx{};
  c.dt = TrajectoryConfig::kDefaultTravellingDt;
  c.t_max = t_max;
  c.sample_stride = 100;
  c.n_traj = 100000;
  return c;
}

inline RunConfig cavity_spectrum_base(SystemParams p) {
  RunConfig c;
  c.command = Command::reproduce;
  c.params = p;
  c.mode = IntegrationMode::cavity;
  return c;
}

}  // namespace detail

inline const std::vector<FigurePreset>& figure_presets() {
  static const std::vector<FigurePreset> presets = [] {
    std::vector<FigurePreset> v;
    const auto named = [](RunConfig c, const std::string& id) {
      c.figure = id;
      c.output = "out/" + id;
      return c;
    };
    const SystemParams symmetric600 = SystemParams::symmetric(0.01, 1.0, 10.0, 600.0);

    v.push_back({"fig1", "travelling-wave mean intensities", named(detail::travelling_wave_base(7.5), "fig1"), {}, 2.67e6,
                 {"n1+n3, n2+n3 and n1-n2 conserved within 3 SE",
                  "near-complete conversion into mode 3, then partial reconversion"}});
    v.push_back({"fig2", "travelling-wave V(X3) and Fano(N1+N2)", named(detail::travelling_wave_base(4.0), "fig2"), {},
                 2.67e6,
                 {"V(X3) < 1 before peak conversion", "Fano(N1+N2) < 1 at early times"}});
    v.push_back({"fig3", "travelling-wave Duan-Simon/4 and EPR products",
                 named(detail::travelling_wave_base(4.0), "fig3"), {}, 2.67e6,
                 {"Duan-Simon/4 < 1 during the interaction", "EPR12 = EPR21 < 1 at some time"}});

    RunConfig stab = named(detail::cavity_spectrum_base(SystemParams::symmetric(0.01, 1.0, 1.0, 0.0)), "stability");
    v.push_back({"stability", "stability boundary in (gamma3/gamma, eps)", stab, {}, 0.0,
                 {"boundary equals 2 gamma sqrt(gamma gamma3) / kappa", "boundary increases with gamma3/gamma"}});

    v.push_back({"fig4", "spectral variance of X3", named(detail::cavity_spectrum_base(symmetric600), "fig4"),
                 {200.0, 400.0, 600.0}, 0.0,
                 {"min V(X3) < 1 for each pump", "squeezing deepens with pump"}});
    v.push_back({"fig5", "spectral Duan-Simon for modes 1, 2", named(detail::cavity_spectrum_base(symmetric600), "fig5"),
                 {200.0, 400.0, 600.0}, 0.0,
                 {"min V(X1+X2)+V(Y1-Y2) < 4 for each pump", "violation deepens with pump"}});
    v.push_back({"fig6", "spectral EPR product", named(detail::cavity_spectrum_base(symmetric600), "fig6"),
                 {200.0, 400.0, 600.0}, 0.0,
                 {"EPR product < 1 at eps = 600", "EPR12 = EPR21", "violation deepens with pump"}});

    SystemParams asym{0.01, 1.0, 40.0, 2.0, cplx{400.0, 0.0}, cplx{2400.0, 0.0}};
    v.push_back({"fig7", "asymmetric steering", named(detail::cavity_spectrum_base(asym), "fig7"), {}, 0.0,
                 {"min EPR12 < 1 (2 steers 1)", "EPR21 >= 1 everywhere (1 cannot steer 2)"}});

    RunConfig above = detail::cavity_spectrum_base(SystemParams::symmetric(0.01, 1.0, 10.0, 1000.0));
    above.alpha1_0 = above.alpha2_0 = above.alpha3_0 = cplx{};
    above.dt.reset();  // 1e-3 / max gamma
    above.t_max = 10.0;
    above.sample_stride = 1000;
    above.n_traj = 10000;
    v.push_back({"fig8", "above-threshold intracavity intensities", named(above, "fig8"), {}, 2.2e5,
                 {"late-time n1 above the semiclassical fixed point", "late-time n3 below the semiclassical fixed point"}});
    return v;
  }();
  return presets;
}

inline const FigurePreset& find_preset(std::string_view id) {
  for (const auto& p : figure_presets())
    if (p.id == id) return p;
  throw ContractViolation("unknown figure '" + std::string(id) + "' (expected fig1..fig8 or stability)");
}

inline RunConfig preset_config(std::string_view id, int line) {
  try {
    return find_preset(id).config;
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what(), line);
  }
}

}  // namespace sfg::io
