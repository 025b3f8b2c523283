// Flat square torus of period 2pi with spectral calculus.
//
// Conventions, fixed once for the whole library:
//   z = x + iy,  dz = dx + i dy,  dzbar = dx - i dy
//   dz ^ dzbar = -2i dx ^ dy
//   Kahler form  omega = dx ^ dy  (i.e. g_{1 1bar} = 1/2),  Vol = 4 pi^2
//   every (1,0)-form is stored as its dz coefficient, every (0,1)-form as its
//   dzbar coefficient, every (1,1)-form as its dz^dzbar coefficient
//   d' = d_z    = (d_x - i d_y)/2
//   d'' = d_zbar = (d_x + i d_y)/2
//   Lambda(eta dz^dzbar) = -2i eta, hence i*Lambda gives the factor 2
//   box0 = i Lambda d'' d' = -2 d_z d_zbar,  symbol (k^2 + l^2)/2 on e^{i(kx+ly)}
//
// All derivatives are exact on band-limited data (FFT symbol calculus).
#pragma once

#include <complex>

#include <Eigen/Dense>

#include "higgsflow/errors.hpp"

namespace hf {

using cxd = std::complex<double>;

struct TorusGeometry {
  int N;  // grid points per side; even, >= 8

  explicit TorusGeometry(int n) : N(n) {
    if (N < 8 || N % 2 != 0) throw Error("TorusGeometry: N must be even and >= 8");
  }

  static constexpr double period = 6.283185307179586476925286766559;  // 2 pi
  double volume() const { return period * period; }                   // 4 pi^2
  double dx() const { return period / N; }
  double x(int ix) const { return period * ix / N; }
  double y(int iy) const { return period * iy / N; }
  long idx(int ix, int iy) const { return static_cast<long>(iy) * N + ix; }
  long size() const { return static_cast<long>(N) * N; }
};

struct ScalarField {
  int N = 0;
  Eigen::VectorXcd v;  // length N*N, index iy*N + ix

  ScalarField() = default;
  explicit ScalarField(const TorusGeometry& g) : N(g.N), v(Eigen::VectorXcd::Zero(g.size())) {}

  cxd& at(int ix, int iy) { return v[static_cast<long>(iy) * N + ix]; }
  cxd at(int ix, int iy) const { return v[static_cast<long>(iy) * N + ix]; }
};

void require_shape(const ScalarField& f, const TorusGeometry& g);

// Fills f by sampling fn(x, y) on the grid.
template <class Fn>
ScalarField sample_scalar(const TorusGeometry& g, Fn&& fn) {
  ScalarField f(g);
  for (int iy = 0; iy < g.N; ++iy)
    for (int ix = 0; ix < g.N; ++ix) f.at(ix, iy) = fn(g.x(ix), g.y(iy));
  return f;
}

// Spectral d_z and d_zbar (coefficient-level; see convention sheet above).
ScalarField d_prime(const ScalarField& f, const TorusGeometry& g);
ScalarField d_double_prime(const ScalarField& f, const TorusGeometry& g);

// i * Lambda applied to a (1,1) coefficient field: returns 2 * eta.
ScalarField i_lambda_contract(const ScalarField& eta, const TorusGeometry& g);
// Lambda itself: -2i * eta.
ScalarField lambda_contract(const ScalarField& eta, const TorusGeometry& g);

// Volume integral with respect to omega = dx ^ dy: (4 pi^2 / N^2) * sum.
cxd integrate(const ScalarField& f, const TorusGeometry& g);
double integrate_real(const ScalarField& f, const TorusGeometry& g);

// box0 = -2 d_z d_zbar, Fourier symbol (k^2 + l^2)/2.
ScalarField box0(const ScalarField& u, const TorusGeometry& g);

// Mean-zero solution of box0(u) = rhs - mean(rhs). Throws SolvabilityViolation
// when |mean(rhs)| > 1e-8 * max|rhs| (the periodic problem needs a mean-zero
// right-hand side; constants span the kernel of box0).
ScalarField solve_poisson(const ScalarField& rhs, const TorusGeometry& g);

// Radial curvature-class normalization integral
//   int_0^1 int_0^R -2r/(1+r^2)^2 dr dt  =  1/(1+R^2) - 1  ->  -1 as R -> inf.
// Composite Simpson under the substitution r = tan(theta); uniform panels in r
// cannot resolve the unit-scale peak once R is large.
double p1_gamma1_integral(double radial_cutoff, int radial_nodes);

}  // namespace hf
