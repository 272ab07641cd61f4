#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sfg/errors.hpp"
#include "sfg/integrator.hpp"
#include "sfg/moments.hpp"
#include "sfg/params.hpp"
#include "sfg/philox.hpp"

namespace sfg {

enum class IntegrationMode { travelling_wave, cavity };

inline std::string to_string(IntegrationMode m) { return m == IntegrationMode::cavity ? "cavity" : "tw"; }

struct TrajectoryConfig {
  /// Step size. Travelling wave: in scaled time zeta = kappa |a1(0)| t.
  /// Cavity: raw time.
  double dt = 5e-4;
  double t_max = 1.0;
  std::size_t sample_stride = 100;  ///< steps between recorded samples
  std::size_t n_traj = 1000;
  std::uint64_t seed = 1;
  IntegrationMode mode = IntegrationMode::travelling_wave;
  unsigned threads = 0;  ///< 0 = SFG_THREADS or hardware concurrency; never affects results

  static constexpr double kDefaultTravellingDt = 5e-4;

  /// Default cavity step: 1e-3 of the fastest decay time.
  static double default_cavity_dt(const SystemParams& p) {
    return 1e-3 / std::max({p.gamma1, p.gamma2, p.gamma3});
  }

  std::size_t steps() const { return static_cast<std::size_t>(std::llround(t_max / dt)); }

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ContractViolation("invariant violated: dt > 0");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ContractViolation("invariant violated: t_max > 0");
    if (sample_stride == 0) throw ContractViolation("invariant violated: sample_stride >= 1");
    if (n_traj < 2) throw ContractViolation("invariant violated: n_traj >= 2");
    if (steps() == 0) throw ContractViolation("invariant violated: t_max must span at least one step");
  }

  bool operator==(const TrajectoryConfig&) const = default;
};

/// Diverged fraction above which an ensemble is rejected.
inline constexpr double kMaxDivergedFraction = 1e-4;
/// Number of equal trajectory batches used for standard errors.
inline constexpr std::size_t kDefaultBatches = 64;

inline unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SFG_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

struct StepPlan {
  SystemParams params;
  double dt_raw;      // integration step in raw time
  double time_unit;   // raw time per reported time unit
  std::size_t steps;
  std::size_t stride;
  std::size_t samples;
};

inline StepPlan plan(const SystemParams& params, const PhaseSpacePoint& init, const TrajectoryConfig& cfg) {
  cfg.validate();
  params.validate();
  if (!is_healthy(init)) throw ContractViolation("initial state must be finite");
  StepPlan s{params, cfg.dt, 1.0, cfg.steps(), cfg.sample_stride, 0};
  if (cfg.mode == IntegrationMode::travelling_wave) {
    s.params = SystemParams::travelling_wave(params.kappa);
    const double rate = params.kappa * std::abs(init.a1);
    if (!(rate > 0.0)) throw ContractViolation("travelling-wave scaling needs a nonzero initial a1");
    s.time_unit = 1.0 / rate;
    s.dt_raw = cfg.dt / rate;
  }
  s.samples = s.steps / s.stride + 1;
  return s;
}

inline constexpr std::size_t kLanes = 8;

// Integrates trajectories [first, first + count) side by side, writing
// single-trajectory moments to out[lane][sample]. healthy[lane] is cleared
// for trajectories that diverge; their lanes are parked at vacuum.
inline void integrate_group(const StepPlan& s, const PhaseSpacePoint& init, const Philox4x32& gen, std::uint64_t first,
                            std::size_t count, std::vector<std::vector<MomentSet>>& out,
                            std::array<bool, kLanes>& healthy) {
  PointLanes<kLanes> x;
  for (std::size_t l = 0; l < kLanes; ++l) {
    x.set(l, init);
    healthy[l] = l < count;
    if (healthy[l]) out[l][0] = MomentSet::of(init);
  }
  std::array<std::array<double, 4>, kLanes> noise{};
  for (std::size_t n = 0; n < s.steps; ++n) {
    for (std::size_t l = 0; l < count; ++l) noise[l] = gaussian_quad(gen, first + l, n);
    step_lanes<kLanes>(s.params, x, s.dt_raw, noise);
    const bool record = (n + 1) % s.stride == 0;
    for (std::size_t l = 0; l < count; ++l) {
      if (!healthy[l]) continue;
      const PhaseSpacePoint p = x.get(l);
      if (!is_healthy(p)) {
        healthy[l] = false;
        x.set(l, PhaseSpacePoint{});
        continue;
      }
      if (record) out[l][(n + 1) / s.stride] = MomentSet::of(p);
    }
  }
}

}  // namespace detail

/// Integrates an ensemble of positive-P trajectories and accumulates moments.
///
/// Trajectory i draws its noise from the counter (seed, i, step), and
/// trajectories are grouped into contiguous batches reduced in index order,
/// so the table is bit-identical for any worker count.
inline MomentTable run_ensemble(const SystemParams& params, const PhaseSpacePoint& init, const TrajectoryConfig& cfg,
                                std::size_t n_batches = kDefaultBatches) {
  const auto s = detail::plan(params, init, cfg);
  const std::size_t B = std::min<std::size_t>(n_batches, cfg.n_traj);
  const Philox4x32 gen(cfg.seed);

  MomentTable table;
  table.n_trajectories = cfg.n_traj;
  table.time_label = cfg.mode == IntegrationMode::travelling_wave ? "zeta" : "t";
  table.times.resize(s.samples);
  for (std::size_t k = 0; k < s.samples; ++k) table.times[k] = static_cast<double>(k * s.stride) * cfg.dt;

  // batch_sum[b][sample]
  std::vector<std::vector<MomentSet>> batch_sum(B, std::vector<MomentSet>(s.samples));
  std::vector<std::size_t> kept(B, 0);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    std::vector<std::vector<MomentSet>> traj(detail::kLanes, std::vector<MomentSet>(s.samples));
    std::array<bool, detail::kLanes> healthy{};
    for (std::size_t b = next++; b < B; b = next++) {
      const std::size_t first = b * cfg.n_traj / B;
      const std::size_t last = (b + 1) * cfg.n_traj / B;
      auto& sums = batch_sum[b];
      for (std::size_t g = first; g < last; g += detail::kLanes) {
        const std::size_t count = std::min(detail::kLanes, last - g);
        detail::integrate_group(s, init, gen, g, count, traj, healthy);
        for (std::size_t l = 0; l < count; ++l) {
          if (!healthy[l]) continue;
          for (std::size_t k = 0; k < s.samples; ++k) sums[k] += traj[l][k];
          ++kept[b];
        }
      }
    }
  };
  const unsigned nthreads = std::min<unsigned>(resolve_thread_count(cfg.threads), static_cast<unsigned>(B));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t b = 0; b < B; ++b) table.n_used += kept[b];
  table.n_diverged = cfg.n_traj - table.n_used;
  table.batch_count = kept;
  if (static_cast<double>(table.n_diverged) > kMaxDivergedFraction * static_cast<double>(cfg.n_traj) ||
      table.n_used < 2) {
    std::ostringstream msg;
    msg << table.n_diverged << " of " << cfg.n_traj << " trajectories diverged (limit "
        << kMaxDivergedFraction << " of the ensemble)";
    throw EnsembleQualityError(msg.str(), table.n_diverged, cfg.n_traj);
  }

  table.mean.assign(s.samples, MomentSet{});
  table.batch_mean.assign(s.samples, std::vector<MomentSet>(B));
  for (std::size_t k = 0; k < s.samples; ++k) {
    MomentSet total;
    for (std::size_t b = 0; b < B; ++b) {
      total += batch_sum[b][k];
      if (kept[b] > 0) table.batch_mean[k][b] = (1.0 / static_cast<double>(kept[b])) * batch_sum[b][k];
    }
    table.mean[k] = (1.0 / static_cast<double>(table.n_used)) * total;
  }
  return table;
}

struct MeanFieldPath {
  std::vector<double> times;
  std::vector<PhaseSpacePoint> states;
  bool diverged = false;
};

/// Noise-free integration of the same equations on the same sample grid.
inline MeanFieldPath semiclassical_trajectory(const SystemParams& params, const PhaseSpacePoint& init,
                                              const TrajectoryConfig& cfg) {
  const auto s = detail::plan(params, init, cfg);
  MeanFieldPath path;
  path.times.reserve(s.samples);
  path.states.reserve(s.samples);
  path.times.push_back(0.0);
  path.states.push_back(init);
  PhaseSpacePoint x = init;
  constexpr std::array<double, 4> quiet{0.0, 0.0, 0.0, 0.0};
  for (std::size_t n = 0; n < s.steps; ++n) {
    x = step(s.params, x, s.dt_raw, quiet);
    if (!is_healthy(x)) {
      path.diverged = true;
      break;
    }
    if ((n + 1) % s.stride == 0) {
      path.times.push_back(static_cast<double>(n + 1) * cfg.dt);
      path.states.push_back(x);
    }
  }
  return path;
}

}  // namespace sfg
