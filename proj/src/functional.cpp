#include "higgsflow/functional.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>

namespace hf {

namespace {

// Pointwise log det of a positive definite Hermitian matrix field via Cholesky.
Eigen::VectorXd log_det_field(const HermitianMetricField& m) {
  const long n = m.H.size();
  const int r = m.rank();
  Eigen::VectorXd out(n);
  if (r == 1) {
    out = m.H.plane(0, 0).real().array().log();
    return out;
  }
  for (long p = 0; p < n; ++p) {
    Eigen::LLT<Eigen::MatrixXcd> llt(m.H.matrix_at(p));
    if (llt.info() != Eigen::Success)
      throw NonPositiveDeterminant("q1: metric is not positive definite at a grid point");
    out[p] = 2.0 * llt.matrixL().toDenseMatrix().diagonal().real().array().log().sum();
  }
  return out;
}

// tr(A * B) as a real scalar field, tracking the largest imaginary part seen.
ScalarField trace_product(const MatrixField& a, const MatrixField& b, double& imag) {
  MatrixField pa = a, pb = b;
  pa.kind = Kind::endomorphism;
  pb.kind = Kind::endomorphism;
  ScalarField t = trace(pa * pb);
  imag = std::max(imag, t.v.imag().cwiseAbs().maxCoeff());
  return t;
}

// The k-pairing <Y, X>_k = tr(Y * k^-1 X^dag k), integrated over the torus.
double paired_integral(const MatrixField& Y, const MatrixField& X,
                       const HermitianMetricField& k, const TorusGeometry& g, double& imag) {
  MatrixField x = X;
  x.kind = Kind::endomorphism;
  MatrixField adj = pointwise_inverse(k.H) * conj_transpose(x) * k.H;
  double dummy = 0.0;
  ScalarField t = trace_product(Y, adj, dummy);
  imag = std::max(imag, dummy);
  return integrate_real(t, g);
}

}  // namespace

ScalarField q1(const HermitianMetricField& h, const HermitianMetricField& k) {
  require_compatible(h.H, k.H);
  ScalarField out;
  out.N = h.H.N;
  out.v = (log_det_field(h) - log_det_field(k)).cast<cxd>();
  return out;
}

FunctionalReport donaldson_path(const HermitianMetricField& h, const HermitianMetricField& k,
                                const HiggsBundle& bundle, const TorusGeometry& g, int nodes,
                                double c) {
  if (nodes < 4) throw Error("donaldson_path: at least 4 quadrature nodes required");
  require_compatible(h.H, k.H);
  FunctionalReport rep;
  rep.method = FunctionalReport::Method::path;
  rep.path_nodes = nodes;

  MatrixField S = mat_log_metric(h, k);
  ScalarField trS = trace(S);
  rep.imag_residue = trS.v.imag().cwiseAbs().maxCoeff();
  rep.q1_integral = integrate_real(trS, g);

  gsl_integration_glfixed_table* tbl =
      gsl_integration_glfixed_table_alloc(static_cast<size_t>(nodes));
  double q2 = 0.0;
  try {
    for (int i = 0; i < nodes; ++i) {
      double tau = 0.0, w = 0.0;
      gsl_integration_glfixed_point(0.0, 1.0, static_cast<size_t>(i), &tau, &w, tbl);
      HermitianMetricField ht = mat_exp_selfadjoint(cxd(tau, 0.0) * S, k);
      MatrixField Kt = mean_curvature(bundle, ht, g);
      ScalarField integrand = trace_product(Kt, S, rep.imag_residue);
      q2 += w * integrate_real(integrand, g);
    }
  } catch (...) {
    gsl_integration_glfixed_table_free(tbl);
    throw;
  }
  gsl_integration_glfixed_table_free(tbl);

  rep.q2_integral = q2;
  rep.value = q2 - c * rep.q1_integral;
  return rep;
}

FunctionalReport donaldson_closed_form(const HermitianMetricField& h,
                                       const HermitianMetricField& k, const HiggsBundle& bundle,
                                       const TorusGeometry& g, double c) {
  require_compatible(h.H, k.H);
  FunctionalReport rep;
  rep.method = FunctionalReport::Method::closed_form;
  rep.path_nodes = 0;

  MatrixField S = mat_log_metric(h, k);
  ScalarField trS = trace(S);
  rep.imag_residue = trS.v.imag().cwiseAbs().maxCoeff();
  rep.q1_integral = integrate_real(trS, g);

  MatrixField Kk = mean_curvature(bundle, k, g);
  double first = integrate_real(trace_product(Kk, S, rep.imag_residue), g);

  // D''s pieces as plain coefficients: dzbar part d_zbar(s) + [alpha, s],
  // dz part [Phi, s].
  MatrixField s_endo = S;
  s_endo.kind = Kind::endomorphism;
  MatrixField a_endo = bundle.hol.alpha;
  a_endo.kind = Kind::endomorphism;
  MatrixField phi_endo = bundle.phi;
  phi_endo.kind = Kind::endomorphism;

  MatrixField dzbar_part = d_double_prime(s_endo, g);
  dzbar_part.kind = Kind::endomorphism;
  dzbar_part = dzbar_part + commutator(a_endo, s_endo);
  MatrixField dz_part = commutator(phi_endo, s_endo);

  // Entry (i,j) in the k-eigenframe of s carries weight psi(lam_i - lam_j);
  // psi_simpson(x1, x2) evaluates at x2 - x1, hence the swapped arguments.
  auto weight = [](double x, double y) { return psi_simpson(y, x); };
  double second = 0.0;
  for (const MatrixField* piece : {&dzbar_part, &dz_part}) {
    MatrixField Y = apply_two_var(S, *piece, weight, k);
    second += paired_integral(Y, *piece, k, g, rep.imag_residue);
  }
  // |dz|^2 = |dzbar|^2 = 2 for the flat metric normalized to omega = dx dy.
  second *= 2.0;

  rep.q2_integral = first + second;
  rep.value = rep.q2_integral - c * rep.q1_integral;
  return rep;
}

GradientCheck gradient_check(const HermitianMetricField& h, const HermitianMetricField& k,
                             const MatrixField& v, const HiggsBundle& bundle,
                             const TorusGeometry& g, double step, double c) {
  require_compatible(v, h.H);
  require_selfadjoint(v, h, 1e-8, "gradient_check");
  if (!(step > 0.0)) throw Error("gradient_check: step must be positive");

  auto L_at = [&](double eps) {
    HermitianMetricField he = mat_exp_selfadjoint(cxd(eps, 0.0) * v, h);
    return donaldson_closed_form(he, k, bundle, g, c).value;
  };
  // Centered differences at step and step/2, Richardson-extrapolated.
  double d1 = (L_at(step) - L_at(-step)) / (2.0 * step);
  double d2 = (L_at(0.5 * step) - L_at(-0.5 * step)) / step;
  GradientCheck out;
  out.finite_diff = (4.0 * d2 - d1) / 3.0;

  MatrixField K = mean_curvature(bundle, h, g);
  MatrixField dev = K - (cxd(c, 0.0) * identity_field(g, K.r));
  double imag = 0.0;
  out.inner_product = integrate_real(trace_product(dev, v, imag), g);
  return out;
}

}  // namespace hf
