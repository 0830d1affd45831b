#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "codazzi/calculus.hpp"
#include "codazzi/errors.hpp"
#include "codazzi/trigpoly.hpp"

using namespace codazzi;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

TorusSpec unit_torus(int n, double delta0 = 0.0) {
  TorusSpec spec;
  spec.dim = 2;
  spec.lattice = Eigen::MatrixXd::Identity(2, 2);
  spec.spin_shift = Eigen::VectorXd::Zero(2);
  spec.spin_shift[0] = delta0;
  spec.grid = {n, n};
  spec.validate();
  return spec;
}

// random band-limited field with |freq| <= max_freq per axis
ScalarField random_band_limited(const TorusSpec& spec, int max_freq, std::mt19937_64& rng,
                                double amp = 0.3) {
  std::uniform_real_distribution<double> u(-amp, amp);
  TrigPoly poly;
  poly.dim = spec.dim;
  poly.terms.push_back({1.0, false, Eigen::VectorXi::Zero(spec.dim)});
  for (int kx = -max_freq; kx <= max_freq; ++kx)
    for (int ky = 0; ky <= max_freq; ++ky) {
      if (kx == 0 && ky == 0) continue;
      Eigen::VectorXi freq(2);
      freq << kx, ky;
      poly.terms.push_back({u(rng), false, freq});
      poly.terms.push_back({u(rng), true, freq});
    }
  return poly.sample(spec);
}

}  // namespace

TEST_CASE("spectral_partial_constant_is_zero") {
  const TorusSpec spec = unit_torus(8);
  const ScalarField f = ScalarField::Constant(spec.node_count(), 3.25);
  CHECK(spectral_partial(spec, f, 0).abs().maxCoeff() <= 1e-13);
  CHECK(spectral_partial(spec, f, 1).abs().maxCoeff() <= 1e-13);
}

TEST_CASE("spectral_partial_sin_mode_exact") {
  // d/dx sin(2 pi x) = 2 pi cos(2 pi x)
  const TorusSpec spec = unit_torus(8);
  ScalarField f(spec.node_count()), expect(spec.node_count());
  for (int x = 0; x < spec.node_count(); ++x) {
    const double t = spec.lattice_coord(x)[0];
    f[x] = std::sin(kTwoPi * t);
    expect[x] = kTwoPi * std::cos(kTwoPi * t);
  }
  CHECK((spectral_partial(spec, f, 0) - expect).abs().maxCoeff() <= 1e-10);
  CHECK(spectral_partial(spec, f, 1).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("spectral_partial_product_rule") {
  // bandwidth of f*g stays below N/2, so the product differentiates exactly
  const TorusSpec spec = unit_torus(32);
  std::mt19937_64 rng(23);
  const ScalarField f = random_band_limited(spec, 3, rng);
  const ScalarField g = random_band_limited(spec, 3, rng);
  const ScalarField lhs = spectral_partial(spec, ScalarField(f * g), 0);
  const ScalarField rhs = f * spectral_partial(spec, g, 0) + g * spectral_partial(spec, f, 0);
  CHECK((lhs - rhs).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("spectral_partial_axis_out_of_range") {
  const TorusSpec spec = unit_torus(8);
  const ScalarField f = ScalarField::Zero(spec.node_count());
  CHECK_THROWS_AS(spectral_partial(spec, f, 2), std::invalid_argument);
}

TEST_CASE("spectral_partial_nonsquare_lattice") {
  // rectangle with side lengths 1 and 2: d/dx sin(2 pi x / 2) on axis 1
  TorusSpec spec;
  spec.dim = 2;
  spec.lattice = Eigen::MatrixXd::Zero(2, 2);
  spec.lattice(0, 0) = 1.0;
  spec.lattice(1, 1) = 2.0;
  spec.spin_shift = Eigen::VectorXd::Zero(2);
  spec.grid = {8, 8};
  ScalarField f(spec.node_count()), expect(spec.node_count());
  for (int x = 0; x < spec.node_count(); ++x) {
    const double x1 = spec.point(x)[1];  // in [0, 2)
    f[x] = std::sin(kTwoPi * x1 / 2.0);
    expect[x] = (kTwoPi / 2.0) * std::cos(kTwoPi * x1 / 2.0);
  }
  CHECK((spectral_partial(spec, f, 1) - expect).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("laplacian_positive_sign_convention") {
  // flat unit torus: lap sin(2 pi x) = +(2 pi)^2 sin(2 pi x)
  const TorusSpec spec = unit_torus(8);
  const MetricField g = flat_metric(spec);
  ScalarField f(spec.node_count());
  for (int x = 0; x < spec.node_count(); ++x)
    f[x] = std::sin(kTwoPi * spec.lattice_coord(x)[0]);
  const ScalarField lap = laplacian(spec, g, f);
  CHECK((lap - kTwoPi * kTwoPi * f).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("laplacian_annihilates_constants_and_is_linear") {
  const TorusSpec spec = unit_torus(16);
  const MetricField g = flat_metric(spec);
  CHECK(laplacian(spec, g, ScalarField::Constant(spec.node_count(), 2.0)).abs().maxCoeff() <=
        1e-11);
  std::mt19937_64 rng(29);
  const ScalarField f1 = random_band_limited(spec, 3, rng);
  const ScalarField f2 = random_band_limited(spec, 3, rng);
  const ScalarField lhs = laplacian(spec, g, ScalarField(2.0 * f1 - 0.5 * f2));
  const ScalarField rhs = 2.0 * laplacian(spec, g, f1) - 0.5 * laplacian(spec, g, f2);
  CHECK((lhs - rhs).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("laplacian_integrates_to_zero") {
  // integral of a divergence over the closed torus
  const TorusSpec spec = unit_torus(16);
  const MetricField g = flat_metric(spec);
  std::mt19937_64 rng(31);
  const ScalarField f = random_band_limited(spec, 4, rng);
  const ScalarField ones = ScalarField::Ones(spec.node_count());
  CHECK(std::abs(integrate(spec, laplacian(spec, g, f), ones)) <= 1e-9);
}

TEST_CASE("christoffel_constant_metric_vanishes") {
  const TorusSpec spec = unit_torus(8);
  MetricField g(spec.dim, spec.node_count());
  Eigen::MatrixXd m(2, 2);
  m << 2.0, 0.3, 0.3, 1.5;
  for (int x = 0; x < spec.node_count(); ++x) g.set_node(x, m);
  const Tensor3Field gamma = christoffel(spec, g);
  for (const auto& c : gamma.comp) CHECK(c.abs().maxCoeff() <= 1e-12);
  const ScalarField s = scalar_curvature(spec, g);
  CHECK(s.abs().maxCoeff() <= 1e-12);
}

TEST_CASE("christoffel_conformal_closed_form") {
  // g = e^{2u} delta: Gamma^k_ij = d_ik u_j + d_jk u_i - d_ij u_k
  const TorusSpec spec = unit_torus(32);
  std::mt19937_64 rng(37);
  const ScalarField u = random_band_limited(spec, 2, rng, 0.1);
  ScalarField e2u = (2.0 * u).exp();
  MetricField g(spec.dim, spec.node_count());
  g(0, 0) = e2u;
  g(1, 1) = e2u;
  const Tensor3Field gamma = christoffel(spec, g);
  std::vector<ScalarField> du = {spectral_partial(spec, u, 0), spectral_partial(spec, u, 1)};
  double worst = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        ScalarField expect = ScalarField::Zero(spec.node_count());
        if (i == k) expect += du[j];
        if (j == k) expect += du[i];
        if (i == j) expect -= du[k];
        worst = std::max(worst, (gamma(k, i, j) - expect).abs().maxCoeff());
      }
  CHECK(worst <= 1e-8);
}

TEST_CASE("christoffel_symmetric_in_lower_indices") {
  const TorusSpec spec = unit_torus(16);
  std::mt19937_64 rng(41);
  const ScalarField u = random_band_limited(spec, 2, rng, 0.1);
  MetricField g(spec.dim, spec.node_count());
  g(0, 0) = (2.0 * u).exp();
  g(1, 1) = (0.5 * u).exp();
  g(0, 1) = 0.1 * u;
  const Tensor3Field gamma = christoffel(spec, g);
  for (int k = 0; k < 2; ++k)
    CHECK((gamma(k, 0, 1) - gamma(k, 1, 0)).abs().maxCoeff() == 0.0);
}

TEST_CASE("scalar_curvature_conformal_oracle") {
  // g = e^{2u} delta in 2-D: S = 2 e^{-2u} lap_flat(u)  (positive-lap convention)
  const TorusSpec spec = unit_torus(32);
  std::mt19937_64 rng(43);
  const ScalarField u = random_band_limited(spec, 2, rng, 0.08);
  ScalarField e2u = (2.0 * u).exp();
  MetricField g(spec.dim, spec.node_count());
  g(0, 0) = e2u;
  g(1, 1) = e2u;
  const ScalarField s = scalar_curvature(spec, g);
  const ScalarField expect = 2.0 * laplacian(spec, flat_metric(spec), u) / e2u;
  CHECK((s - expect).abs().maxCoeff() <= 1e-6);
}

TEST_CASE("covariant_derivative_hessian_totally_symmetric") {
  // beta = Hess f on the flat torus: (grad beta)_{i;jk} are third partials
  const TorusSpec spec = unit_torus(32);
  std::mt19937_64 rng(47);
  const ScalarField f = random_band_limited(spec, 2, rng, 0.05);
  SymField beta(spec.dim, spec.node_count());
  for (int i = 0; i < 2; ++i) {
    const ScalarField di = spectral_partial(spec, f, i);
    for (int j = i; j < 2; ++j) beta(i, j) = spectral_partial(spec, di, j);
  }
  const MetricField g = flat_metric(spec);
  const Tensor3Field grad = covariant_derivative_sym2(spec, beta, g);
  double asym = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        asym = std::max(asym, (grad(i, j, k) - grad(j, i, k)).abs().maxCoeff());
        asym = std::max(asym, (grad(i, j, k) - grad(i, k, j)).abs().maxCoeff());
      }
  CHECK(asym <= 1e-9);
}

TEST_CASE("covariant_derivative_constant_tensor_flat") {
  const TorusSpec spec = unit_torus(8);
  Eigen::MatrixXd m(2, 2);
  m << 2.0, 0.0, 0.0, -2.0;
  const SymField beta = constant_sym_field(spec, m);
  const Tensor3Field grad = covariant_derivative_sym2(spec, beta, flat_metric(spec));
  for (const auto& c : grad.comp) CHECK(c.abs().maxCoeff() <= 1e-12);
}

TEST_CASE("covariant_derivative_diagonal_product_rule") {
  // diagonal beta, flat metric: (grad beta)_{i;jj} = d_i beta_jj componentwise
  const TorusSpec spec = unit_torus(16);
  std::mt19937_64 rng(53);
  SymField beta(spec.dim, spec.node_count());
  beta(0, 0) = random_band_limited(spec, 2, rng, 0.1) + 2.0;
  beta(1, 1) = random_band_limited(spec, 2, rng, 0.1) + 3.0;
  const Tensor3Field grad = covariant_derivative_sym2(spec, beta, flat_metric(spec));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const ScalarField expect = spectral_partial(spec, beta(j, j), i);
      CHECK((grad(i, j, j) - expect).abs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("integrate_unit_torus") {
  const TorusSpec spec = unit_torus(8);
  const ScalarField ones = ScalarField::Ones(spec.node_count());
  CHECK(integrate(spec, ones, ones) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("integrate_mean_zero_mode") {
  const TorusSpec spec = unit_torus(8);
  ScalarField f(spec.node_count());
  for (int x = 0; x < spec.node_count(); ++x)
    f[x] = std::sin(kTwoPi * spec.lattice_coord(x)[0]);
  CHECK(std::abs(integrate(spec, f, ScalarField::Ones(spec.node_count()))) <= 1e-12);
}

TEST_CASE("integrate_constant_weight_quarter") {
  // weight = |det beta^{-1}| for beta = diag(2,-2) is 1/4 everywhere
  const TorusSpec spec = unit_torus(8);
  const ScalarField ones = ScalarField::Ones(spec.node_count());
  const ScalarField w = ScalarField::Constant(spec.node_count(), 0.25);
  CHECK(integrate(spec, ones, w) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("integrate_flags_negative_weight") {
  const TorusSpec spec = unit_torus(8);
  const ScalarField ones = ScalarField::Ones(spec.node_count());
  ScalarField w = ScalarField::Ones(spec.node_count());
  w[3] = -0.5;
  bool negative = false;
  integrate(spec, ones, w, &negative);
  CHECK(negative);
  integrate(spec, ones, ones, &negative);
  CHECK_FALSE(negative);
}

TEST_CASE("integrate_of_exact_derivative_vanishes") {
  const TorusSpec spec = unit_torus(16);
  std::mt19937_64 rng(59);
  const ScalarField ones = ScalarField::Ones(spec.node_count());
  for (int trial = 0; trial < 5; ++trial) {
    const ScalarField f = random_band_limited(spec, 3, rng);
    const int axis = trial % 2;
    CHECK(std::abs(integrate(spec, spectral_partial(spec, f, axis), ones)) <= 1e-10);
  }
}

TEST_CASE("green_identity_constant_inputs") {
  const TorusSpec spec = unit_torus(16);
  const MetricField g = flat_metric(spec);
  const int sd = 2;
  std::mt19937_64 rng(61);

  // F constant
  {
    Eigen::VectorXcd psi(spec.node_count() * sd);
    const ScalarField re = random_band_limited(spec, 3, rng);
    const ScalarField im = random_band_limited(spec, 3, rng);
    for (int x = 0; x < spec.node_count(); ++x) {
      psi[x * sd] = Complex(re[x], im[x]);
      psi[x * sd + 1] = Complex(im[x], -re[x]);
    }
    const ScalarField f_const = ScalarField::Constant(spec.node_count(), 2.5);
    CHECK(green_identity_residual(spec, g, f_const, psi, sd) <= 1e-9);
  }

  // psi constant
  {
    Eigen::VectorXcd psi =
        Eigen::VectorXcd::Constant(spec.node_count() * sd, Complex(0.7, -0.2));
    const ScalarField f = random_band_limited(spec, 3, rng);
    CHECK(green_identity_residual(spec, g, f, psi, sd) <= 1e-9);
  }
}

TEST_CASE("green_identity_random_band_limited") {
  // holds analytically; property test over random fields at N = 32
  const TorusSpec spec = unit_torus(32);
  const MetricField g = flat_metric(spec);
  const int sd = 2;
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 5; ++trial) {
    const ScalarField f = random_band_limited(spec, 3, rng);
    const ScalarField re0 = random_band_limited(spec, 3, rng);
    const ScalarField im0 = random_band_limited(spec, 3, rng);
    const ScalarField re1 = random_band_limited(spec, 3, rng);
    const ScalarField im1 = random_band_limited(spec, 3, rng);
    Eigen::VectorXcd psi(spec.node_count() * sd);
    for (int x = 0; x < spec.node_count(); ++x) {
      psi[x * sd] = Complex(re0[x], im0[x]);
      psi[x * sd + 1] = Complex(re1[x], im1[x]);
    }
    CHECK(green_identity_residual(spec, g, f, psi, sd) <= 1e-7);
  }
}

TEST_CASE("torus_spec_rejects_bad_input") {
  TorusSpec spec;
  spec.dim = 2;
  spec.lattice = Eigen::MatrixXd::Identity(2, 2);
  spec.spin_shift = Eigen::VectorXd::Zero(2);
  spec.grid = {7, 8};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.grid = {2, 8};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.grid = {8, 8};
  spec.lattice(0, 0) = 0.0;
  spec.lattice(1, 1) = 0.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.lattice = Eigen::MatrixXd::Identity(2, 2);
  spec.spin_shift[0] = 0.3;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("trig_poly_parser") {
  const TrigPoly p = parse_trig_poly("1 + 0.2*sin(1, 0) - 0.5*cos(0, 2)", 2);
  CHECK(p.terms.size() == 3);
  Eigen::VectorXd t(2);
  t << 0.25, 0.0;
  // 1 + 0.2*sin(pi/2) - 0.5*cos(0) = 1 + 0.2 - 0.5
  CHECK(p.eval(t) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(p.max_frequency() == 2);
  CHECK_THROWS_AS(parse_trig_poly("1 +", 2), config_error);
  CHECK_THROWS_AS(parse_trig_poly("0.2*tan(1, 0)", 2), config_error);
  CHECK_THROWS_AS(parse_trig_poly("0.2*sin(1)", 2), config_error);
}
