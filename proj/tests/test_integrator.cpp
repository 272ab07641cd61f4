#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "sfg/integrator.hpp"
#include "sfg/philox.hpp"

using namespace sfg;
using Catch::Approx;

TEST_CASE("Philox4x32-10 known-answer vectors", "[rng]") {
  using C = Philox4x32::Counter;
  // Reference outputs published with the Random123 distribution.
  CHECK(Philox4x32(Philox4x32::Key{0u, 0u})(C{0u, 0u, 0u, 0u}) ==
        C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32(Philox4x32::Key{0xffffffffu, 0xffffffffu})(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32(Philox4x32::Key{0xa4093822u, 0x299f31d0u})(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("Gaussian quads are standard normal and stream-independent", "[rng]") {
  const Philox4x32 gen(42);
  double s = 0.0, s2 = 0.0, s4 = 0.0, cross = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const auto z = gaussian_quad(gen, static_cast<std::uint64_t>(i % 97), static_cast<std::uint64_t>(i / 97));
    for (double x : z) s += x, s2 += x * x, s4 += x * x * x * x;
    cross += z[0] * z[1] + z[2] * z[3] + z[0] * z[2];
  }
  const double N = 4.0 * n;
  CHECK(std::abs(s / N) < 5.0 / std::sqrt(N));
  CHECK(s2 / N == Approx(1.0).margin(5.0 * std::sqrt(2.0 / N)));
  CHECK(s4 / N == Approx(3.0).margin(5.0 * std::sqrt(96.0 / N)));
  CHECK(std::abs(cross / (3.0 * n)) < 5.0 / std::sqrt(3.0 * n));
  // Pure function of (trajectory, step).
  CHECK(gaussian_quad(gen, 5, 9) == gaussian_quad(gen, 5, 9));
  CHECK(gaussian_quad(gen, 5, 9) != gaussian_quad(gen, 9, 5));
  CHECK(gaussian_quad(gen, 5, 9) != gaussian_quad(Philox4x32(43), 5, 9));
}

TEST_CASE("principal square root matches std::sqrt", "[integrator]") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 2000; ++i) {
    const cplx z{u(rng), i % 10 == 0 ? 0.0 : u(rng)};
    double re = 0.0, im = 0.0;
    principal_sqrt(z.real(), z.imag(), re, im);
    const cplx ref = std::sqrt(z);
    CHECK(std::abs(cplx{re, im} - ref) <= 1e-14 * std::max(1.0, std::abs(ref)));
  }
  double re = 1.0, im = 1.0;
  principal_sqrt(-4.0, -0.0, re, im);
  CHECK(re == 0.0);
  CHECK(im == -2.0);
  principal_sqrt(0.0, 0.0, re, im);
  CHECK(re == 0.0);
  CHECK(im == 0.0);
}

TEST_CASE("vacuum is absorbing", "[integrator]") {
  const auto p = SystemParams::travelling_wave(0.01);
  PhaseSpacePoint x;
  for (int n = 0; n < 100; ++n) x = step(p, x, 1e-2, {1.3, -0.4, 2.2, 0.7});
  CHECK(x == PhaseSpacePoint{});
}

TEST_CASE("coherent initial state has conjugate plus variables", "[integrator]") {
  const auto x = PhaseSpacePoint::coherent({3.0, 1.0}, {2.0, -5.0}, {0.0, 0.5});
  CHECK(x.a1p == std::conj(x.a1));
  CHECK(x.a2p == std::conj(x.a2));
  CHECK(x.a3p == std::conj(x.a3));
}

TEST_CASE("first-order step reads the travelling-wave drift", "[integrator]") {
  const auto p = SystemParams::travelling_wave(0.01);
  const cplx a{700.0, 20.0}, b{650.0, -10.0};
  const auto x0 = PhaseSpacePoint::coherent(a, b, 0.0);
  const double dt = 1e-7;
  const auto x1 = step(p, x0, dt, {0.0, 0.0, 0.0, 0.0});
  const cplx da3 = (x1.a3 - x0.a3) / dt;
  CHECK(std::abs(da3 - (-p.kappa * a * b)) < 1e-6 * std::abs(p.kappa * a * b));
  // a1 changes only at second order because a3 starts at zero.
  CHECK(std::abs(x1.a1 - x0.a1) < 1e-9 * std::abs(x0.a1));
  // Drift function agrees with the same read.
  const auto d = drift(p, x0);
  CHECK(d.a3 == -p.kappa * a * b);
  CHECK(d.a1 == cplx{});
}

TEST_CASE("noise enters only the low-frequency modes with the documented pattern", "[integrator]") {
  SystemParams p = SystemParams::travelling_wave(0.02);
  const auto x = PhaseSpacePoint::coherent({10.0, 0.0}, {10.0, 0.0}, {-30.0, 4.0});
  const auto n = noise_increment(p, x, {0.3, -0.2, 0.5, 0.1});
  const cplx I{0.0, 1.0};
  const cplx b = std::sqrt(p.kappa * x.a3 / 2.0), bp = std::sqrt(p.kappa * x.a3p / 2.0);
  CHECK(n.a1 == b * (0.3 + I * 0.5));
  CHECK(n.a2 == b * (0.3 - I * 0.5));
  CHECK(n.a1p == bp * (-0.2 + I * 0.1));
  CHECK(n.a2p == bp * (-0.2 - I * 0.1));
  CHECK(n.a3 == cplx{});
  CHECK(n.a3p == cplx{});
}

TEST_CASE("lane step matches a direct complex implementation", "[integrator]") {
  // Semi-implicit midpoint written with std::complex and the drift and
  // noise functions, as a check on the hand-vectorized kernel.
  const auto reference = [](const SystemParams& p, const PhaseSpacePoint& x, double dt, std::array<double, 4> z) {
    const double s = std::sqrt(dt);
    const std::array<double, 4> dW = {z[0] * s, z[1] * s, z[2] * s, z[3] * s};
    PhaseSpacePoint mid = x;
    for (int it = 0; it < kMidpointIterations; ++it)
      mid = x + 0.5 * (dt * drift(p, mid) + noise_increment(p, mid, dW));
    return 2.0 * mid - x;
  };
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  SystemParams p{0.01, 1.0, 1.5, 10.0, cplx{300.0, 20.0}, cplx{250.0, -5.0}};
  auto x = PhaseSpacePoint::coherent({120.0, 3.0}, {90.0, -7.0}, {-40.0, 2.0});
  for (int n = 0; n < 200; ++n) {
    const std::array<double, 4> z = {nd(rng), nd(rng), nd(rng), nd(rng)};
    const auto a = step(p, x, 1e-3, z);
    const auto b = reference(p, x, 1e-3, z);
    const double scale = a.max_abs();
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(a.components()[i] - b.components()[i]) < 1e-12 * scale);
    x = a;
  }
}

TEST_CASE("each lane of the batched step equals the single step", "[integrator]") {
  constexpr std::size_t W = 8;
  SystemParams p = SystemParams::symmetric(0.01, 1.0, 10.0, 500.0);
  PointLanes<W> lanes;
  std::array<PhaseSpacePoint, W> singles;
  std::array<std::array<double, 4>, W> noise{};
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  for (std::size_t l = 0; l < W; ++l) {
    singles[l] = PhaseSpacePoint::coherent({10.0 * l, 1.0}, {5.0, -1.0 * l}, {-3.0, 0.5});
    lanes.set(l, singles[l]);
  }
  for (int n = 0; n < 50; ++n) {
    for (auto& z : noise)
      for (double& v : z) v = nd(rng);
    step_lanes<W>(p, lanes, 1e-3, noise);
    for (std::size_t l = 0; l < W; ++l) {
      singles[l] = step(p, singles[l], 1e-3, noise[l]);
      CHECK(lanes.get(l) == singles[l]);
    }
  }
}

TEST_CASE("deterministic integration converges at second order", "[integrator]") {
  const auto p = SystemParams::travelling_wave(0.01);
  const auto x0 = PhaseSpacePoint::coherent(700.0, 700.0, 0.0);
  const auto integrate = [&](int steps) {
    const double T = 0.2;
    PhaseSpacePoint x = x0;
    for (int n = 0; n < steps; ++n) x = step(p, x, T / steps, {0.0, 0.0, 0.0, 0.0});
    return x;
  };
  const auto ref = integrate(6400);
  const double e1 = std::abs(integrate(50).a3 - ref.a3);
  const double e2 = std::abs(integrate(100).a3 - ref.a3);
  const double e3 = std::abs(integrate(200).a3 - ref.a3);
  INFO("errors " << e1 << " " << e2 << " " << e3);
  CHECK(std::log2(e1 / e2) == Approx(2.0).margin(0.15));
  CHECK(std::log2(e2 / e3) == Approx(2.0).margin(0.15));
  // Richardson: a single step against two half steps differs at third order
  // locally. a3 carries the leading error; a1 starts one order higher here.
  const auto one = step(p, x0, 0.02, {0.0, 0.0, 0.0, 0.0});
  const auto half = step(p, step(p, x0, 0.01, {0.0, 0.0, 0.0, 0.0}), 0.01, {0.0, 0.0, 0.0, 0.0});
  const auto one2 = step(p, x0, 0.01, {0.0, 0.0, 0.0, 0.0});
  const auto half2 = step(p, step(p, x0, 0.005, {0.0, 0.0, 0.0, 0.0}), 0.005, {0.0, 0.0, 0.0, 0.0});
  const double r = std::abs(one.a3 - half.a3) / std::abs(one2.a3 - half2.a3);
  CHECK(std::log2(r) == Approx(3.0).margin(0.3));
}

TEST_CASE("mean-field travelling wave conserves the Manley-Rowe sums", "[integrator]") {
  const auto p = SystemParams::travelling_wave(0.01);
  auto x = PhaseSpacePoint::coherent(700.0, 700.0, 0.0);
  const double start = std::norm(x.a1) + std::norm(x.a3);
  double worst = 0.0;
  for (int n = 0; n < 2000; ++n) {
    x = step(p, x, 1e-4, {0.0, 0.0, 0.0, 0.0});
    worst = std::max(worst, std::abs(std::norm(x.a1) + std::norm(x.a3) - start) / start);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("health check flags divergence and non-finite values", "[integrator]") {
  CHECK(is_healthy(PhaseSpacePoint::coherent(1e7, 0.0, 0.0)));
  CHECK_FALSE(is_healthy(PhaseSpacePoint::coherent(2e8, 0.0, 0.0)));
  PhaseSpacePoint x;
  x.a3p = cplx{std::numeric_limits<double>::quiet_NaN(), 0.0};
  CHECK_FALSE(is_healthy(x));
  x.a3p = cplx{0.0, std::numeric_limits<double>::infinity()};
  CHECK_FALSE(is_healthy(x));
}
