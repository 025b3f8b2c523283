// The Donaldson functional L(h, k) on pairs of metrics, evaluated two
// independent ways:
//   path:        L = int_0^1 int_X tr[(K_t - cI) s] dvol dt along the geodesic
//                h_t = k exp(t s), s = log_k(h), with Gauss-Legendre nodes in t
//   closed form: L = int tr[(K_k - cI) s] dvol
//                  + 2 * int sum_ij psi(lam_i - lam_j) |(D''s)_ij|^2 dvol,
//                psi(u) = (e^u - u - 1)/u^2, entries in the k-eigenframe of s,
//                D''s = (d_zbar s + [alpha, s]) dzbar + [Phi, s] dz, and the
//                factor 2 is the metric norm of dz/dzbar.
// The two must agree; the closed form is one eigen-pass and no t-quadrature.
#pragma once

#include "higgsflow/higgs.hpp"

namespace hf {

struct FunctionalReport {
  double q1_integral = 0.0;  // int log det(k^-1 h) dvol
  double q2_integral = 0.0;  // the c-independent part of L
  double value = 0.0;        // q2_integral - c * q1_integral
  enum class Method { path, closed_form } method = Method::path;
  int path_nodes = 0;
  double imag_residue = 0.0;  // |Im| discarded when realizing value
};

// Pointwise log det(k^-1 h); real, exact under scaling: q1(h, a h) = -r log a.
ScalarField q1(const HermitianMetricField& h, const HermitianMetricField& k);

FunctionalReport donaldson_path(const HermitianMetricField& h, const HermitianMetricField& k,
                                const HiggsBundle& bundle, const TorusGeometry& g, int nodes,
                                double c = 0.0);

FunctionalReport donaldson_closed_form(const HermitianMetricField& h,
                                       const HermitianMetricField& k, const HiggsBundle& bundle,
                                       const TorusGeometry& g, double c = 0.0);

struct GradientCheck {
  double finite_diff = 0.0;    // Richardson-extrapolated centered difference
  double inner_product = 0.0;  // int tr[(K_h - cI) v] dvol
};

// Derivative of L(., k) at h along h_eps = h exp(eps v) for h-selfadjoint v.
GradientCheck gradient_check(const HermitianMetricField& h, const HermitianMetricField& k,
                             const MatrixField& v, const HiggsBundle& bundle,
                             const TorusGeometry& g, double step, double c = 0.0);

}  // namespace hf
