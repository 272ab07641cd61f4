#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "sfg/ensemble.hpp"
#include "sfg/linearization.hpp"
#include "sfg/observables.hpp"
#include "sfg/spectrum.hpp"

using namespace sfg;
using Catch::Approx;

namespace {

const double kA0 = 1000.0 / std::sqrt(2.0);

// With mode 1 and mode 3 empty the coupling never acts: mode 2 relaxes as
// a driven, damped coherent state and every sample is a product state.
MomentTable coherent_table() {
  TrajectoryConfig c;
  c.mode = IntegrationMode::cavity;
  c.dt = 1e-3;
  c.t_max = 0.5;
  c.sample_stride = 100;
  c.n_traj = 128;
  return run_ensemble(SystemParams{0.01, 1.0, 2.0, 10.0, cplx{}, cplx{50.0, 10.0}},
                      PhaseSpacePoint::coherent(0.0, {-12.0, 20.0}, 0.0), c);
}

const MomentTable& tw_table() {
  static const MomentTable t = [] {
    TrajectoryConfig c;
    c.n_traj = 4000;
    c.t_max = 3.0;
    c.sample_stride = 250;
    c.seed = 5;
    return run_ensemble(SystemParams::travelling_wave(0.01), PhaseSpacePoint::coherent(kA0, kA0, 0.0), c);
  }();
  return t;
}

// Stationary covariance E[x x^T] of d x = -A x dt + B dW: A S + S A^T = D.
Matrix6c lyapunov(const Matrix6c& A, const Matrix6c& D) {
  Eigen::Matrix<cplx, 36, 36> K = Eigen::Matrix<cplx, 36, 36>::Zero();
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) {
        K(i + 6 * j, k + 6 * j) += A(i, k);  // (A S)_ij
        K(i + 6 * j, i + 6 * k) += A(j, k);  // (S A^T)_ij
      }
  Eigen::Matrix<cplx, 36, 1> d;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) d[i + 6 * j] = D(i, j);
  const Eigen::Matrix<cplx, 36, 1> s = K.fullPivLu().solve(d);
  Matrix6c S;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) S(i, j) = s[i + 6 * j];
  return S;
}

// L L^T = S for complex symmetric S (no conjugation).
Matrix6c symmetric_cholesky(const Matrix6c& S) {
  Matrix6c L = Matrix6c::Zero();
  for (int j = 0; j < 6; ++j) {
    cplx d = S(j, j);
    for (int k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    L(j, j) = std::sqrt(d);
    for (int i = j + 1; i < 6; ++i) {
      cplx v = S(i, j);
      for (int k = 0; k < j; ++k) v -= L(i, k) * L(j, k);
      L(i, j) = v / L(j, j);
    }
  }
  return L;
}

}  // namespace

TEST_CASE("coherent states sit exactly at the classical boundaries", "[observables]") {
  const auto t = coherent_table();
  for (double theta : {0.0, 0.4, std::numbers::pi / 2, 2.5, -1.0}) {
    for (int mode = 1; mode <= 3; ++mode) {
      const auto v = quadrature_variance(t, {mode, theta});
      for (double x : v.value) CHECK(x == Approx(1.0).margin(1e-9));
    }
  }
  for (double x : fano_sum(t).value) CHECK(x == Approx(1.0).margin(1e-9));
  for (double x : duan_simon(t, +1).value) CHECK(x == Approx(4.0).margin(1e-9));
  for (double x : duan_simon(t, -1).value) CHECK(x == Approx(4.0).margin(1e-9));
  for (double x : epr_product(t, 1, 2).value) CHECK(x == Approx(1.0).margin(1e-9));
  for (double x : quadrature_covariance(t, QuadratureSpec::X(1), QuadratureSpec::X(2)).value)
    CHECK(x == Approx(0.0).margin(1e-9));
  CHECK(fano_sum(t).threshold == 1.0);
  CHECK(duan_simon(t, 1).threshold == 4.0);
}

TEST_CASE("angles are taken modulo 2 pi", "[observables]") {
  CHECK(QuadratureSpec{1, 2.0 * std::numbers::pi + 0.3}.angle() == Approx(0.3).epsilon(1e-12));
  CHECK(QuadratureSpec{1, -0.3}.angle() == Approx(2.0 * std::numbers::pi - 0.3).epsilon(1e-12));
}

TEST_CASE("uncertainty relation and covariance consistency", "[observables]") {
  const auto& t = tw_table();
  for (double theta : {0.0, 0.7, 1.9}) {
    for (int mode = 1; mode <= 3; ++mode) {
      const QuadratureSpec a{mode, theta}, b{mode, theta + std::numbers::pi / 2};
      const auto va = quadrature_variance(t, a), vb = quadrature_variance(t, b);
      const auto ca = quadrature_covariance(t, a, a);
      for (std::size_t k = 0; k < va.size(); ++k) {
        CHECK(va.value[k] + vb.value[k] >= 2.0 - 1e-12 * t.mean[k].n(mode).real());
        CHECK(ca.value[k] + 1.0 == Approx(va.value[k]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("reported correlations are real within statistical noise", "[observables]") {
  const auto& t = tw_table();
  CHECK(quadrature_variance(t, QuadratureSpec::X(3)).max_imag_ratio <= 1.0);
  CHECK(fano_sum(t).max_imag_ratio <= 1.0);
  CHECK(duan_simon(t, +1).max_imag_ratio <= 1.0);
  CHECK(epr_product(t, 1, 2).max_imag_ratio <= 1.0);
}

TEST_CASE("travelling-wave correlations show the expected nonclassical features", "[observables]") {
  const auto& t = tw_table();
  const auto v3 = quadrature_variance(t, QuadratureSpec::X(3));
  const auto fano = fano_sum(t);
  const auto ds = duan_simon(t, +1);
  const auto ds_minus = duan_simon(t, -1);
  const auto epr = epr_product(t, 1, 2);
  const auto cov = quadrature_covariance(t, QuadratureSpec::X(1), QuadratureSpec::X(2));
  bool squeezed = false, sub_poisson = false, entangled = false, steering = false, anticorrelated = false;
  for (std::size_t k = 1; k < t.samples(); ++k) {
    squeezed |= v3.value[k] + 3.0 * v3.se[k] < 1.0;
    sub_poisson |= fano.value[k] + 3.0 * fano.se[k] < 1.0;
    entangled |= ds.value[k] + 3.0 * ds.se[k] < 4.0;
    steering |= epr.value[k] + 3.0 * epr.se[k] < 1.0;
    anticorrelated |= cov.value[k] + 3.0 * cov.se[k] < 0.0;
    CHECK(ds_minus.value[k] >= 4.0 - 3.0 * ds_minus.se[k]);
    // Steering implies entanglement.
    if (epr.value[k] + 3.0 * epr.se[k] < 1.0) CHECK(ds.value[k] + 3.0 * ds.se[k] < 4.0);
  }
  CHECK(squeezed);
  CHECK(sub_poisson);
  CHECK(entangled);
  CHECK(steering);
  CHECK(anticorrelated);
}

TEST_CASE("exchange of modes 1 and 2 leaves correlations unchanged", "[observables]") {
  const auto& t = tw_table();
  const auto check = [&](const MomentFunction& f, const std::string& name) {
    const auto d = evaluate_series(t, f, name, std::nullopt);
    for (std::size_t k = 0; k < d.size(); ++k) {
      INFO(name << " at zeta=" << d.times[k]);
      CHECK(std::abs(d.value[k]) <= 5.0 * d.se[k] + 1e-9);
    }
  };
  using namespace moments;
  check([](const MomentSet& m) { return quadrature_variance(m, QuadratureSpec::X(1)) - quadrature_variance(m, QuadratureSpec::X(2)); },
        "V(X1)-V(X2)");
  check([](const MomentSet& m) { return quadrature_variance(m, QuadratureSpec::Y(1)) - quadrature_variance(m, QuadratureSpec::Y(2)); },
        "V(Y1)-V(Y2)");
  check([](const MomentSet& m) { return fano_mode(m, 1) - fano_mode(m, 2); }, "F1-F2");
  check([](const MomentSet& m) {
    const auto V = quadrature_matrix(m);
    return epr_value(V, 1, 2) - epr_value(V, 2, 1);
  }, "EPR12-EPR21");
}

TEST_CASE("single-mode intensities turn super-Poissonian", "[observables]") {
  const auto& t = tw_table();
  const auto f1 = fano_mode(t, 1);
  CHECK(f1.value.back() - 3.0 * f1.se.back() > 1.0);
}

TEST_CASE("observables match closed forms on a Gaussian linear system", "[observables][gaussian]") {
  // Stationary law of the linearized cavity at eps = 400: positive-P
  // samples alpha + x with E[x x^T] = Sigma from the Lyapunov equation.
  const auto p = SystemParams::symmetric(0.01, 1.0, 10.0, 400.0);
  const auto ss = solve_steady(p);
  const auto A = drift_matrix(p, ss).m;
  const auto D = diffusion_product(p, ss).m;
  const Matrix6c Sigma = lyapunov(A, D);
  REQUIRE((A * Sigma + Sigma * A.transpose() - D).cwiseAbs().maxCoeff() < 1e-10);
  const Matrix6c L = symmetric_cholesky(Sigma);
  REQUIRE((L * L.transpose() - Sigma).cwiseAbs().maxCoeff() < 1e-10);

  // Equal-time covariance is also the integral of the spectral matrix.
  {
    const LinearizedCavity model(p, ss);
    // Substituting w = tan(u) leaves a smooth integrand on (-pi/2, pi/2).
    Matrix6c integral = Matrix6c::Zero();
    const int n = 20000;
    const double h = std::numbers::pi / n;
    for (int i = 0; i < n; ++i) {
      const double u = -std::numbers::pi / 2 + (i + 0.5) * h, c = std::cos(u);
      integral += model.intracavity(std::tan(u)) * (h / (c * c));
    }
    integral /= 2.0 * std::numbers::pi;
    CHECK((integral - Sigma).cwiseAbs().maxCoeff() < 1e-3 * Sigma.cwiseAbs().maxCoeff());
  }

  const std::size_t batches = 64, per = 500;
  MomentTable t;
  t.times = {0.0};
  t.batch_count.assign(batches, per);
  t.n_trajectories = t.n_used = batches * per;
  t.batch_mean.assign(1, std::vector<MomentSet>(batches));
  std::mt19937_64 rng(77);
  std::normal_distribution<double> nd;
  MomentSet total;
  const PhaseSpacePoint centre = PhaseSpacePoint::coherent(ss.alpha1, ss.alpha2, ss.alpha3);
  for (std::size_t b = 0; b < batches; ++b) {
    MomentSet sum;
    for (std::size_t i = 0; i < per; ++i) {
      Eigen::Matrix<double, 6, 1> w;
      for (int j = 0; j < 6; ++j) w[j] = nd(rng);
      const Vector6c x = L * w.cast<cplx>();
      PhaseSpacePoint s = centre;
      s.a1 += x[0], s.a1p += x[1], s.a2 += x[2], s.a2p += x[3], s.a3 += x[4], s.a3p += x[5];
      sum += MomentSet::of(s);
    }
    total += sum;
    t.batch_mean[0][b] = (1.0 / per) * sum;
  }
  t.mean = {(1.0 / static_cast<double>(t.n_used)) * total};

  // Closed forms. Quadratures q = U x, physical covariance I + U Sigma U^T.
  const Matrix6c U = quadrature_transform();
  const Matrix6d V = Matrix6d::Identity() + (U * Sigma * U.transpose()).real();
  const auto within = [](const CorrelationSeries& s, double expect) {
    INFO(s.name << ": " << s.value[0] << " +- " << s.se[0] << " vs " << expect);
    CHECK(std::abs(s.value[0] - expect) <= 3.0 * s.se[0]);
  };
  within(quadrature_variance(t, QuadratureSpec::X(1)), V(quad::X1, quad::X1));
  within(quadrature_variance(t, QuadratureSpec::Y(1)), V(quad::Y1, quad::Y1));
  within(quadrature_variance(t, QuadratureSpec::X(3)), V(quad::X3, quad::X3));
  within(quadrature_variance(t, QuadratureSpec::Y(3)), V(quad::Y3, quad::Y3));
  within(quadrature_covariance(t, QuadratureSpec::X(1), QuadratureSpec::X(2)), V(quad::X1, quad::X2));
  within(duan_simon(t, +1), duan_simon_value(V, +1));
  within(epr_product(t, 1, 2), epr_value(V, 1, 2));

  // Fano factor by Isserlis: N = c + l^T z + z^T Q z / 2 over z = (x1, x1+, x2, x2+).
  Eigen::Matrix4cd S4 = Sigma.topLeftCorner<4, 4>();
  Eigen::Vector4cd l;
  l << std::conj(ss.alpha1), ss.alpha1, std::conj(ss.alpha2), ss.alpha2;
  Eigen::Matrix4cd Q = Eigen::Matrix4cd::Zero();
  Q(0, 1) = Q(1, 0) = Q(2, 3) = Q(3, 2) = 1.0;
  const cplx meanN = std::norm(ss.alpha1) + std::norm(ss.alpha2) + 0.5 * (Q * S4).trace();
  const cplx varN = (l.transpose() * S4 * l)(0, 0) + 0.5 * (Q * S4 * Q * S4).trace();
  within(fano_sum(t), 1.0 + (varN / meanN).real());
}

TEST_CASE("undefined observables are reported", "[observables]") {
  TrajectoryConfig c;
  c.mode = IntegrationMode::cavity;
  c.dt = 1e-3;
  c.t_max = 0.01;
  c.n_traj = 8;
  const auto t = run_ensemble(SystemParams::symmetric(0.01, 1.0, 10.0, 0.0), PhaseSpacePoint{}, c);
  CHECK_THROWS_AS(fano_sum(t), UndefinedObservable);
  Matrix6d V = Matrix6d::Identity();
  V(quad::X2, quad::X2) = 0.0;
  CHECK_THROWS_AS(epr_value(V, 1, 2), UndefinedObservable);
  CHECK_THROWS_AS(epr_value(V, 1, 1), ContractViolation);
}
