#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "sfg/ensemble.hpp"
#include "sfg/observables.hpp"

using namespace sfg;
using Catch::Approx;

namespace {

const double kA0 = 1000.0 / std::sqrt(2.0);

PhaseSpacePoint fig1_initial() { return PhaseSpacePoint::coherent(kA0, kA0, 0.0); }

TrajectoryConfig tw_config(std::size_t n, double t_max, std::size_t stride) {
  TrajectoryConfig c;
  c.n_traj = n;
  c.t_max = t_max;
  c.sample_stride = stride;
  c.seed = 17;
  return c;
}

}  // namespace

TEST_CASE("vacuum stays empty", "[ensemble]") {
  TrajectoryConfig c;
  c.mode = IntegrationMode::cavity;
  c.dt = 1e-3;
  c.t_max = 0.5;
  c.n_traj = 40;
  const auto t = run_ensemble(SystemParams::symmetric(0.01, 1.0, 10.0, 0.0), PhaseSpacePoint{}, c);
  for (const auto& m : t.mean) CHECK(m == MomentSet{});
  CHECK(t.n_used == 40);
}

TEST_CASE("small ensembles equal the scalar reference bit for bit", "[ensemble]") {
  for (std::size_t n : {2u, 5u, 8u}) {
    for (std::size_t steps : {1u, 2u, 3u}) {
      auto c = tw_config(n, steps * 5e-4, 1);
      auto t = run_ensemble(SystemParams::travelling_wave(0.01), fig1_initial(), c);
      CHECK(t.mean == oracle::scalar_ensemble(SystemParams::travelling_wave(0.01), fig1_initial(), c));

      c.mode = IntegrationMode::cavity;
      c.dt = 1e-3;
      c.t_max = steps * 1e-3;
      const auto p = SystemParams::symmetric(0.01, 1.0, 10.0, 600.0);
      const auto init = PhaseSpacePoint::coherent(300.0, 300.0, -90.0);
      t = run_ensemble(p, init, c);
      CHECK(t.mean == oracle::scalar_ensemble(p, init, c));
    }
  }
}

TEST_CASE("results do not depend on the worker count", "[ensemble]") {
  auto c = tw_config(200, 0.1, 20);
  c.threads = 1;
  const auto a = run_ensemble(SystemParams::travelling_wave(0.01), fig1_initial(), c);
  c.threads = 3;
  const auto b = run_ensemble(SystemParams::travelling_wave(0.01), fig1_initial(), c);
  c.threads = 7;
  const auto d = run_ensemble(SystemParams::travelling_wave(0.01), fig1_initial(), c);
  CHECK(a.mean == b.mean);
  CHECK(a.batch_mean == b.batch_mean);
  CHECK(a.mean == d.mean);
  c.seed = 18;
  const auto e = run_ensemble(SystemParams::travelling_wave(0.01), fig1_initial(), c);
  CHECK_FALSE(a.mean == e.mean);
}

TEST_CASE("sample grid and batch layout", "[ensemble]") {
  const auto c = tw_config(100, 0.05, 10);
  const auto t = run_ensemble(SystemParams::travelling_wave(0.01), fig1_initial(), c);
  REQUIRE(t.samples() == 11);
  CHECK(t.times.front() == 0.0);
  CHECK(t.times.back() == Approx(0.05).epsilon(1e-12));
  CHECK(t.time_label == "zeta");
  CHECK(t.batches() == kDefaultBatches);
  std::size_t total = 0;
  for (auto n : t.batch_count) {
    total += n;
    CHECK((n == 1 || n == 2));
  }
  CHECK(total == 100);
  CHECK(t.n_diverged == 0);
}

TEST_CASE("plus variables are conjugate on average", "[ensemble]") {
  const auto c = tw_config(2000, 3.0, 500);
  const auto t = run_ensemble(SystemParams::travelling_wave(0.01), fig1_initial(), c);
  for (std::size_t k = 0; k < t.samples(); ++k) {
    for (int mode = 1; mode <= 3; ++mode) {
      const auto diff = [mode](const MomentSet& m) { return m.ap(mode) - std::conj(m.a(mode)); };
      const cplx d = diff(t.mean[k]);
      // Batch spread of the difference, real and imaginary parts separately.
      double sr = 0.0, si = 0.0;
      for (const auto& b : t.batch_mean[k]) {
        const cplx e = diff(b) - d;
        sr += e.real() * e.real(), si += e.imag() * e.imag();
      }
      const double nb = static_cast<double>(t.batches());
      const double se_r = std::sqrt(sr / (nb - 1.0) / nb), se_i = std::sqrt(si / (nb - 1.0) / nb);
      INFO("sample " << k << " mode " << mode);
      CHECK(std::abs(d.real()) <= 5.0 * se_r + 1e-9 * std::abs(t.mean[k].a(mode)));
      CHECK(std::abs(d.imag()) <= 5.0 * se_i + 1e-9 * std::abs(t.mean[k].a(mode)));
    }
  }
}

TEST_CASE("Manley-Rowe sums are conserved within 3 SE", "[ensemble]") {
  const auto c = tw_config(4000, 3.0, 200);
  const auto t = run_ensemble(SystemParams::travelling_wave(0.01), fig1_initial(), c);
  const auto check = [&](const MomentFunction& f, const std::string& name) {
    const auto s = evaluate_series(t, f, name, std::nullopt);
    for (std::size_t k = 1; k < s.size(); ++k) {
      INFO(name << " at zeta=" << s.times[k] << ": " << s.value[k] - s.value[0] << " +- " << s.se[k]);
      CHECK(std::abs(s.value[k] - s.value[0]) <= 3.0 * s.se[k]);
    }
  };
  check([](const MomentSet& m) { return m.n(1) + m.n(3); }, "n1+n3");
  check([](const MomentSet& m) { return m.n(2) + m.n(3); }, "n2+n3");
  check([](const MomentSet& m) { return m.n(1) - m.n(2); }, "n1-n2");
}

TEST_CASE("halving the step changes mean intensities only within noise", "[ensemble]") {
  // Same Brownian paths at both resolutions: each coarse normal is the
  // normalized sum of the two fine normals it covers. Differences are then
  // judged against their own paired standard error.
  const auto p = SystemParams::travelling_wave(0.01);
  const double dz = 5e-4, scale = 1.0 / (0.01 * kA0);
  const std::size_t coarse = 2000, n_traj = 2000;
  const Philox4x32 gen(23);
  std::array<double, 3> diff{}, diff2{}, sum{};
  for (std::size_t i = 0; i < n_traj; ++i) {
    PhaseSpacePoint xc = fig1_initial(), xf = xc;
    for (std::size_t n = 0; n < coarse; ++n) {
      const auto z1 = gaussian_quad(gen, i, 2 * n), z2 = gaussian_quad(gen, i, 2 * n + 1);
      std::array<double, 4> z;
      for (int j = 0; j < 4; ++j) z[j] = (z1[j] + z2[j]) / std::sqrt(2.0);
      xc = step(p, xc, dz * scale, z);
      xf = step(p, xf, 0.5 * dz * scale, z1);
      xf = step(p, xf, 0.5 * dz * scale, z2);
    }
    const std::array<cplx, 3> nc = {xc.a1p * xc.a1, xc.a2p * xc.a2, xc.a3p * xc.a3};
    const std::array<cplx, 3> nf = {xf.a1p * xf.a1, xf.a2p * xf.a2, xf.a3p * xf.a3};
    for (int j = 0; j < 3; ++j) {
      const double d = nc[j].real() - nf[j].real();
      diff[j] += d, diff2[j] += d * d, sum[j] += nc[j].real();
    }
  }
  const double N = static_cast<double>(n_traj);
  for (int j = 0; j < 3; ++j) {
    const double m = diff[j] / N, se = std::sqrt((diff2[j] / N - m * m) / (N - 1.0));
    INFO("mode " << j + 1 << ": <n>=" << sum[j] / N << ", coarse - fine = " << m << " +- " << se);
    if (j < 2) {
      CHECK(std::abs(m) <= 3.0 * se);
    } else {
      // n3 is nearly noiseless here; the residual weak error is tiny.
      CHECK(std::abs(m) < 1e-7 * sum[j] / N);
    }
  }
}

TEST_CASE("semiclassical path reaches the fixed point", "[ensemble]") {
  const auto p = SystemParams::symmetric(0.01, 1.0, 10.0, 400.0);
  TrajectoryConfig c;
  c.mode = IntegrationMode::cavity;
  c.dt = 1e-3;
  c.t_max = 20.0;
  c.sample_stride = 1000;
  const auto path = semiclassical_trajectory(p, PhaseSpacePoint{}, c);
  REQUIRE_FALSE(path.diverged);
  REQUIRE(path.states.size() == 21);
  const auto ss = solve_steady(p);
  const auto& x = path.states.back();
  CHECK(std::abs(x.a1 - ss.alpha1) < 1e-6 * std::abs(ss.alpha1));
  CHECK(std::abs(x.a3 - ss.alpha3) < 1e-6 * std::abs(ss.alpha3));

  // Free decay at the bare rates; amplitudes small enough that the
  // coupling is negligible.
  const auto free = SystemParams{0.01, 1.0, 2.0, 10.0, cplx{}, cplx{}};
  c.t_max = 1.0;
  c.sample_stride = 100;
  const auto decay = semiclassical_trajectory(free, PhaseSpacePoint::coherent(1e-3, 1e-3, 0.0), c);
  CHECK(decay.states.back().a1.real() == Approx(1e-3 * std::exp(-1.0)).epsilon(1e-6));
  CHECK(decay.states.back().a2.real() == Approx(1e-3 * std::exp(-2.0)).epsilon(1e-6));
}

TEST_CASE("divergent ensembles are rejected", "[ensemble]") {
  TrajectoryConfig c;
  c.mode = IntegrationMode::cavity;
  c.dt = 2.0;
  c.t_max = 200.0;
  c.sample_stride = 10;
  c.n_traj = 16;
  try {
    (void)run_ensemble(SystemParams::symmetric(0.01, 1.0, 10.0, 1000.0), PhaseSpacePoint{}, c);
    FAIL("expected EnsembleQualityError");
  } catch (const EnsembleQualityError& e) {
    CHECK(e.diverged() > 0);
    CHECK(e.total() == 16);
  }
}

TEST_CASE("invalid trajectory configurations are rejected", "[ensemble]") {
  TrajectoryConfig c;
  c.n_traj = 1;
  CHECK_THROWS_AS(c.validate(), ContractViolation);
  c = TrajectoryConfig{};
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), ContractViolation);
  c = TrajectoryConfig{};
  CHECK_THROWS_AS(run_ensemble(SystemParams::travelling_wave(0.01), PhaseSpacePoint{}, c), ContractViolation);
}
