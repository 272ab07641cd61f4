#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfg/ensemble.hpp"
#include "sfg/params.hpp"
#include "sfg/spectrum.hpp"

namespace sfg::io {

enum class Command { steady, stability_map, spectrum, simulate, reproduce };

inline std::string to_string(Command c) {
  switch (c) {
    case Command::steady: return "steady";
    case Command::stability_map: return "stability-map";
    case Command::spectrum: return "spectrum";
    case Command::simulate: return "simulate";
    case Command::reproduce: return "reproduce";
  }
  return "steady";
}

/// Everything a single CLI invocation needs. Text form is one key=value per
/// line; see config_keys() for the full list.
struct RunConfig {
  Command command = Command::steady;
  SystemParams params;

  // Trajectory ensemble. dt left empty picks the mode's default step.
  std::optional<double> dt;
  double t_max = 1.0;
  std::size_t sample_stride = 100;
  std::size_t n_traj = 1000;
  std::uint64_t seed = 1;
  IntegrationMode mode = IntegrationMode::travelling_wave;
  unsigned threads = 0;
  // Initial coherent amplitudes (scaled-time runs need alpha1_0 != 0).
  cplx alpha1_0{1000.0 / std::sqrt(2.0), 0.0};
  cplx alpha2_0{1000.0 / std::sqrt(2.0), 0.0};
  cplx alpha3_0{};

  FrequencyGrid grid;

  // Stability map rows and pump bracket.
  double ratio_min = 0.5;
  double ratio_max = 20.0;
  std::size_t ratio_points = 40;
  double eps_min = 1.0;
  double eps_max = 5000.0;

  std::string figure;          ///< reproduce target, e.g. "fig4"
  std::string output = "out";  ///< output directory

  TrajectoryConfig trajectory() const {
    TrajectoryConfig t;
    t.mode = mode;
    t.dt = dt ? *dt
              : (mode == IntegrationMode::cavity ? TrajectoryConfig::default_cavity_dt(params)
                                                 : TrajectoryConfig::kDefaultTravellingDt);
    t.t_max = t_max;
    t.sample_stride = sample_stride;
    t.n_traj = n_traj;
    t.seed = seed;
    t.threads = threads;
    return t;
  }

  PhaseSpacePoint initial_state() const { return PhaseSpacePoint::coherent(alpha1_0, alpha2_0, alpha3_0); }

  std::vector<double> ratio_grid() const {
    std::vector<double> r(ratio_points);
    if (ratio_points == 1) {
      r[0] = ratio_min;
      return r;
    }
    // Geometric spacing: the boundary grows like sqrt(ratio).
    for (std::size_t i = 0; i < ratio_points; ++i)
      r[i] = ratio_min * std::pow(ratio_max / ratio_min, static_cast<double>(i) / static_cast<double>(ratio_points - 1));
    return r;
  }

  bool operator==(const RunConfig&) const = default;
};

}  // namespace sfg::io
