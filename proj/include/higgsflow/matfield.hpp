// r x r complex-matrix fields on the torus grid and their functional calculus:
// metric fields, exp/log of selfadjoint operators, the two-variable eigenframe
// calculus Psi(s)(A), and the L1/L2/Linf norm family.
//
// Selfadjointness is always relative to a Hermitian metric field H under the
// pairing h(xi, eta) = eta^dagger H xi (linear in the first slot):
//   A selfadjoint wrt h  <=>  (H A)^dagger = H A
//   adjoint of A wrt h:  A^{*h} = H^{-1} A^dagger H.
#pragma once

#include <functional>
#include <vector>

#include "higgsflow/geometry.hpp"

namespace hf {

enum class Kind { endomorphism, form_dz, form_dzbar, form_dzdzbar };

// Storage is one N^2-long complex plane per matrix entry (a,b); pointwise
// algebra is vectorized over planes, eigen-calculus gathers per-point blocks.
struct MatrixField {
  int N = 0;
  int r = 0;
  Kind kind = Kind::endomorphism;
  std::vector<Eigen::VectorXcd> planes;  // r*r planes, entry (a,b) at a*r+b

  MatrixField() = default;
  MatrixField(const TorusGeometry& g, int rank, Kind k);

  Eigen::VectorXcd& plane(int a, int b) { return planes[static_cast<size_t>(a) * r + b]; }
  const Eigen::VectorXcd& plane(int a, int b) const { return planes[static_cast<size_t>(a) * r + b]; }

  Eigen::MatrixXcd matrix_at(long p) const;
  void set_matrix_at(long p, const Eigen::MatrixXcd& m);
  long size() const { return static_cast<long>(N) * N; }
};

void require_same_grid(const MatrixField& a, const TorusGeometry& g);
void require_compatible(const MatrixField& a, const MatrixField& b);

// Constant-matrix field of the given kind.
MatrixField constant_field(const TorusGeometry& g, const Eigen::MatrixXcd& m, Kind k);
MatrixField identity_field(const TorusGeometry& g, int rank);
MatrixField zero_field(const TorusGeometry& g, int rank, Kind k);

// Pointwise algebra. operator* is the plain pointwise matrix product; at most
// one operand may be a form (the product keeps that operand's kind). Wedge
// signs are never implicit -- curvature assembly spells them out.
MatrixField operator+(const MatrixField& a, const MatrixField& b);
MatrixField operator-(const MatrixField& a, const MatrixField& b);
MatrixField operator*(const MatrixField& a, const MatrixField& b);
MatrixField operator*(cxd s, const MatrixField& a);
MatrixField scale_by(const ScalarField& s, const MatrixField& a);
MatrixField commutator(const MatrixField& a, const MatrixField& b);
MatrixField conj_transpose(const MatrixField& a);  // entrywise dagger, kind conjugated
MatrixField pointwise_inverse(const MatrixField& a);
ScalarField trace(const MatrixField& a);
double max_abs(const MatrixField& a);

// Spectral derivatives with kind bookkeeping:
//   d_prime:        endomorphism -> form_dz        (+d_z)
//                   form_dzbar   -> form_dzdzbar   (+d_z, from dz ^ dzbar order)
//   d_double_prime: endomorphism -> form_dzbar     (+d_zbar)
//                   form_dz      -> form_dzdzbar   (-d_zbar, from dzbar ^ dz = -dz ^ dzbar)
MatrixField d_prime(const MatrixField& f, const TorusGeometry& g);
MatrixField d_double_prime(const MatrixField& f, const TorusGeometry& g);

// Positive-definite Hermitian metric field h(xi, eta) = eta^dagger H xi.
struct HermitianMetricField {
  MatrixField H;

  HermitianMetricField() = default;
  explicit HermitianMetricField(MatrixField m);  // validates Hermiticity + positivity

  int rank() const { return H.r; }
  int grid() const { return H.N; }
};

HermitianMetricField identity_metric(const TorusGeometry& g, int rank);
// e^u * h for a real scalar field u.
HermitianMetricField conformal_scale(const ScalarField& u, const HermitianMetricField& h);

// True when (H A)^dagger = H A within tol * max(1, |H A|).
bool is_selfadjoint(const MatrixField& A, const HermitianMetricField& h, double tol = 1e-10);
void require_selfadjoint(const MatrixField& A, const HermitianMetricField& h, double tol,
                         const char* who);

// Metric with matrix base.H * exp(S) for base-selfadjoint S. Eigenwork happens
// on the Hermitian conjugate base.H^{1/2} S base.H^{-1/2}, so the result is
// Hermitian positive definite by construction.
HermitianMetricField mat_exp_selfadjoint(const MatrixField& S, const HermitianMetricField& base);

// Inverse of mat_exp_selfadjoint: the base-selfadjoint logarithm of base^-1 h.
// Throws SpectrumNotPositive if the relative spectrum degenerates.
MatrixField mat_log_metric(const HermitianMetricField& h, const HermitianMetricField& base);

// Two-variable calculus: in the pointwise base-orthonormal eigenframe of s
// (eigenvalues lambda_i), entry (i,j) of A is multiplied by psi(lambda_i,
// lambda_j). Linear in A; polynomial psi reproduces sum b_mn s^m A s^n.
MatrixField apply_two_var(const MatrixField& s, const MatrixField& A,
                          const std::function<double(double, double)>& psi,
                          const HermitianMetricField& base);

// (e^{x2-x1} - (x2-x1) - 1)/(x2-x1)^2 with the removable value 1/2 on the
// diagonal; strictly positive.
double psi_simpson(double x1, double x2);

struct NormTriple {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

// Pointwise |A| = sqrt(tr(A A^{*h})) (real for h-selfadjoint A), then L1, L2,
// Linf over the torus with volume element dx dy.
NormTriple norm_family(const MatrixField& A, const HermitianMetricField& h,
                       const TorusGeometry& g);

// lhs = sqrt(sum a_i^2), rhs = sqrt(n) * log(sum e^{a_i} + sum e^{-a_i});
// lhs <= rhs for every nonempty real vector.
std::pair<double, double> scalar_log_bound(const std::vector<double>& a);

// Smallest and largest eigenvalue of H over the whole grid (closed form for
// rank <= 2). The ratio is the condition number monitored by the flow.
std::pair<double, double> eig_range(const HermitianMetricField& h);

}  // namespace hf
