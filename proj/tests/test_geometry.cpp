#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "higgsflow/geometry.hpp"
#include "helpers.hpp"

using namespace hf;
using doctest::Approx;

namespace {
constexpr double kPi = 3.14159265358979323846;

double max_err(const ScalarField& got, const ScalarField& want) {
  return (got.v - want.v).cwiseAbs().maxCoeff();
}

ScalarField make_field(int N, Eigen::VectorXcd v) {
  ScalarField f;
  f.N = N;
  f.v = std::move(v);
  return f;
}
}  // namespace

TEST_CASE("grid construction and layout") {
  CHECK_THROWS_AS(TorusGeometry(7), Error);   // odd
  CHECK_THROWS_AS(TorusGeometry(4), Error);   // too small
  CHECK_THROWS_AS(TorusGeometry(-8), Error);  // negative
  TorusGeometry g(8);
  CHECK(g.size() == 64);
  CHECK(g.volume() == Approx(4.0 * kPi * kPi).epsilon(1e-15));
  CHECK(g.dx() == Approx(2.0 * kPi / 8.0));
  // x is the fast index.
  ScalarField f = sample_scalar(g, [](double x, double y) { return cxd(x + 10.0 * y, 0.0); });
  CHECK(f.at(3, 0).real() == Approx(g.x(3)));
  CHECK(f.at(0, 5).real() == Approx(10.0 * g.y(5)));
  CHECK(f.v[5 * 8 + 3].real() == Approx(g.x(3) + 10.0 * g.y(5)));
}

TEST_CASE("holomorphic and antiholomorphic derivatives on single modes") {
  TorusGeometry g(32);
  ScalarField eix = sample_scalar(g, [](double x, double) { return std::exp(cxd(0.0, x)); });
  ScalarField eiy = sample_scalar(g, [](double, double y) { return std::exp(cxd(0.0, y)); });

  // d' = (d_x - i d_y)/2: on e^{ix} gives (i/2)e^{ix}; on e^{iy} gives (1/2)e^{iy}.
  ScalarField want = eix;
  want.v *= cxd(0.0, 0.5);
  CHECK(max_err(d_prime(eix, g), want) < 1e-13);

  want = eiy;
  want.v *= cxd(0.5, 0.0);
  CHECK(max_err(d_prime(eiy, g), want) < 1e-13);

  // d'' = (d_x + i d_y)/2: on e^{iy} gives -(1/2)e^{iy}; on e^{ix} gives (i/2)e^{ix}.
  want = eiy;
  want.v *= cxd(-0.5, 0.0);
  CHECK(max_err(d_double_prime(eiy, g), want) < 1e-13);

  want = eix;
  want.v *= cxd(0.0, 0.5);
  CHECK(max_err(d_double_prime(eix, g), want) < 1e-13);
}

TEST_CASE("laplacian symbol and poisson inverse") {
  TorusGeometry g(32);
  ScalarField cx = sample_scalar(g, [](double x, double) { return cxd(std::cos(x), 0.0); });

  // box0 = -2 d_z d_zbar has symbol (k^2 + l^2)/2.
  ScalarField want = cx;
  want.v *= 0.5;
  CHECK(max_err(box0(cx, g), want) < 1e-13);

  ScalarField mode = sample_scalar(g, [](double x, double y) { return std::exp(cxd(0.0, 2 * x + y)); });
  want = mode;
  want.v *= 2.5;
  CHECK(max_err(box0(mode, g), want) < 1e-12);

  // solve_poisson(box0 u) = u for mean-zero u; box0(cos x) = cos x / 2.
  ScalarField u = solve_poisson(cx, g);
  want = cx;
  want.v *= 2.0;
  CHECK(max_err(u, want) < 1e-13);

  std::mt19937 rng(2024);
  ScalarField r = hft::random_scalar(g, rng);
  r.v.array() -= integrate(r, g) / g.volume();  // remove mean
  CHECK(max_err(solve_poisson(box0(r, g), g), r) < 1e-12);

  ScalarField one = sample_scalar(g, [](double, double) { return cxd(1.0, 0.0); });
  CHECK_THROWS_AS(solve_poisson(one, g), SolvabilityViolation);
}

TEST_CASE("box0 is selfadjoint, nonnegative, and equals -2 d'' d'") {
  TorusGeometry g(32);
  std::mt19937 rng(7);
  ScalarField u = hft::random_scalar(g, rng);
  ScalarField v = hft::random_scalar(g, rng);

  cxd a = integrate(make_field(g.N, box0(u, g).v.cwiseProduct(v.v)), g);
  cxd b = integrate(make_field(g.N, u.v.cwiseProduct(box0(v, g).v)), g);
  CHECK(std::abs(a - b) < 1e-10);

  cxd q = integrate(make_field(g.N, box0(u, g).v.cwiseProduct(u.v)), g);
  CHECK(q.real() > -1e-10);

  // box0(u) + 2 d''(d'(u)) = 0 exactly in the discrete spectral calculus.
  ScalarField lhs = box0(u, g);
  lhs.v += 2.0 * d_double_prime(d_prime(u, g), g).v;
  CHECK(lhs.v.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("contraction factors for (1,1) coefficients") {
  TorusGeometry g(8);
  std::mt19937 rng(3);
  ScalarField eta = hft::random_cscalar(g, rng);
  ScalarField il = i_lambda_contract(eta, g);
  ScalarField l = lambda_contract(eta, g);
  CHECK((il.v - 2.0 * eta.v).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((l.v - cxd(0.0, -2.0) * eta.v).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("integration against the flat volume form") {
  TorusGeometry g(32);
  ScalarField c2 = sample_scalar(g, [](double x, double) { return cxd(std::cos(x) * std::cos(x), 0.0); });
  CHECK(integrate_real(c2, g) == Approx(2.0 * kPi * kPi).epsilon(1e-14));
  ScalarField one = sample_scalar(g, [](double, double) { return cxd(1.0, 0.0); });
  CHECK(integrate_real(one, g) == Approx(4.0 * kPi * kPi).epsilon(1e-15));

  // Discrete Stokes: spectral derivatives of periodic data integrate to zero.
  std::mt19937 rng(11);
  ScalarField beta = hft::random_cscalar(g, rng);
  CHECK(std::abs(integrate(d_prime(beta, g), g)) < 1e-10 * beta.v.cwiseAbs().maxCoeff());
  CHECK(std::abs(integrate(d_double_prime(beta, g), g)) < 1e-10 * beta.v.cwiseAbs().maxCoeff());
}

TEST_CASE("projective-line Chern integral by radial quadrature") {
  // Antiderivative of -2r/(1+r^2)^2 is 1/(1+r^2): the truncated integral is
  // exactly 1/(1+R^2) - 1.
  CHECK(p1_gamma1_integral(1.0, 512) == Approx(-0.5).epsilon(1e-10));
  CHECK(p1_gamma1_integral(1000.0, 512) == Approx(1.0 / (1.0 + 1e6) - 1.0).epsilon(1e-9));
  CHECK(p1_gamma1_integral(1e4, 4096) == Approx(-1.0).epsilon(1e-3));
  // Refinement changes the value negligibly.
  double coarse = p1_gamma1_integral(1e4, 2048);
  double fine = p1_gamma1_integral(1e4, 4096);
  CHECK(std::abs(coarse - fine) < 1e-6);
}

TEST_CASE("shape guards") {
  TorusGeometry g8(8), g16(16);
  ScalarField f = sample_scalar(g8, [](double, double) { return cxd(1.0, 0.0); });
  CHECK_THROWS_AS(d_prime(f, g16), ShapeMismatch);
  CHECK_THROWS_AS(integrate(f, g16), ShapeMismatch);
}
