#include "higgsflow/matfield.hpp"

#include <cmath>

#include "higgsflow/parallel.hpp"
#include "spectral_internal.hpp"

namespace hf {

// ===== MatrixField basics ====================================================

MatrixField::MatrixField(const TorusGeometry& g, int rank, Kind k) : N(g.N), r(rank), kind(k) {
  if (rank < 1) throw Error("MatrixField: rank must be >= 1");
  planes.assign(static_cast<size_t>(r) * r, Eigen::VectorXcd::Zero(g.size()));
}

Eigen::MatrixXcd MatrixField::matrix_at(long p) const {
  Eigen::MatrixXcd m(r, r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) m(a, b) = planes[static_cast<size_t>(a) * r + b][p];
  return m;
}

void MatrixField::set_matrix_at(long p, const Eigen::MatrixXcd& m) {
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) planes[static_cast<size_t>(a) * r + b][p] = m(a, b);
}

void require_same_grid(const MatrixField& a, const TorusGeometry& g) {
  if (a.N != g.N) throw ShapeMismatch("matrix field does not match the grid");
}

void require_compatible(const MatrixField& a, const MatrixField& b) {
  if (a.N != b.N || a.r != b.r) throw ShapeMismatch("matrix fields have different shapes");
}

MatrixField constant_field(const TorusGeometry& g, const Eigen::MatrixXcd& m, Kind k) {
  if (m.rows() != m.cols()) throw ShapeMismatch("constant_field: matrix must be square");
  MatrixField f(g, static_cast<int>(m.rows()), k);
  for (int a = 0; a < f.r; ++a)
    for (int b = 0; b < f.r; ++b) f.plane(a, b).setConstant(m(a, b));
  return f;
}

MatrixField identity_field(const TorusGeometry& g, int rank) {
  return constant_field(g, Eigen::MatrixXcd::Identity(rank, rank), Kind::endomorphism);
}

MatrixField zero_field(const TorusGeometry& g, int rank, Kind k) {
  TorusGeometry gg = g;
  return MatrixField(gg, rank, k);
}

// ===== pointwise algebra =====================================================

namespace {

Kind product_kind(Kind a, Kind b) {
  if (a == Kind::endomorphism) return b;
  if (b == Kind::endomorphism) return a;
  throw Error("matrix product of two form coefficients needs explicit wedge signs");
}

}  // namespace

MatrixField operator+(const MatrixField& a, const MatrixField& b) {
  require_compatible(a, b);
  if (a.kind != b.kind) throw Error("adding fields of different form type");
  MatrixField out = a;
  for (size_t p = 0; p < out.planes.size(); ++p) out.planes[p] += b.planes[p];
  return out;
}

MatrixField operator-(const MatrixField& a, const MatrixField& b) {
  require_compatible(a, b);
  if (a.kind != b.kind) throw Error("subtracting fields of different form type");
  MatrixField out = a;
  for (size_t p = 0; p < out.planes.size(); ++p) out.planes[p] -= b.planes[p];
  return out;
}

MatrixField operator*(const MatrixField& a, const MatrixField& b) {
  require_compatible(a, b);
  MatrixField out = a;
  out.kind = product_kind(a.kind, b.kind);
  const int r = a.r;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      Eigen::VectorXcd acc = a.plane(i, 0).cwiseProduct(b.plane(0, j));
      for (int k = 1; k < r; ++k) acc += a.plane(i, k).cwiseProduct(b.plane(k, j));
      out.plane(i, j) = std::move(acc);
    }
  return out;
}

MatrixField operator*(cxd s, const MatrixField& a) {
  MatrixField out = a;
  for (auto& p : out.planes) p *= s;
  return out;
}

MatrixField scale_by(const ScalarField& s, const MatrixField& a) {
  if (s.N != a.N) throw ShapeMismatch("scale_by: grids differ");
  MatrixField out = a;
  for (auto& p : out.planes) p = p.cwiseProduct(s.v);
  return out;
}

MatrixField commutator(const MatrixField& a, const MatrixField& b) { return a * b - b * a; }

MatrixField conj_transpose(const MatrixField& a) {
  MatrixField out = a;
  switch (a.kind) {  // conjugation swaps dz and dzbar; dz^dzbar conjugates to itself up to sign
    case Kind::form_dz: out.kind = Kind::form_dzbar; break;
    case Kind::form_dzbar: out.kind = Kind::form_dz; break;
    default: out.kind = a.kind; break;
  }
  for (int i = 0; i < a.r; ++i)
    for (int j = 0; j < a.r; ++j) out.plane(i, j) = a.plane(j, i).conjugate();
  return out;
}

MatrixField pointwise_inverse(const MatrixField& a) {
  if (a.kind != Kind::endomorphism) throw Error("pointwise_inverse: endomorphisms only");
  MatrixField out = a;
  const long n = a.size();
  if (a.r == 1) {
    out.plane(0, 0) = a.plane(0, 0).cwiseInverse();
    return out;
  }
  if (a.r == 2) {  // vectorized adjugate/determinant over the whole grid
    Eigen::VectorXcd det =
        a.plane(0, 0).cwiseProduct(a.plane(1, 1)) - a.plane(0, 1).cwiseProduct(a.plane(1, 0));
    Eigen::VectorXcd idet = det.cwiseInverse();
    out.plane(0, 0) = a.plane(1, 1).cwiseProduct(idet);
    out.plane(1, 1) = a.plane(0, 0).cwiseProduct(idet);
    out.plane(0, 1) = -a.plane(0, 1).cwiseProduct(idet);
    out.plane(1, 0) = -a.plane(1, 0).cwiseProduct(idet);
    return out;
  }
  parallel_for(n, [&](long p) {
    Eigen::MatrixXcd m = a.matrix_at(p);
    out.set_matrix_at(p, m.inverse());
  });
  return out;
}

ScalarField trace(const MatrixField& a) {
  ScalarField out;
  out.N = a.N;
  out.v = a.plane(0, 0);
  for (int i = 1; i < a.r; ++i) out.v += a.plane(i, i);
  return out;
}

double max_abs(const MatrixField& a) {
  double m = 0.0;
  for (const auto& p : a.planes) m = std::max(m, p.cwiseAbs().maxCoeff());
  return m;
}

// ===== spectral derivatives with kind bookkeeping ===========================

MatrixField d_prime(const MatrixField& f, const TorusGeometry& g) {
  require_same_grid(f, g);
  MatrixField out = f;
  switch (f.kind) {
    case Kind::endomorphism: out.kind = Kind::form_dz; break;
    case Kind::form_dzbar: out.kind = Kind::form_dzdzbar; break;  // d_z eta dz^dzbar
    default: throw Error("d_prime: would produce a dz^dz component");
  }
  for (auto& p : out.planes) p = spectral_apply(p, g.N, 0);
  return out;
}

MatrixField d_double_prime(const MatrixField& f, const TorusGeometry& g) {
  require_same_grid(f, g);
  MatrixField out = f;
  double sign = 1.0;
  switch (f.kind) {
    case Kind::endomorphism: out.kind = Kind::form_dzbar; break;
    case Kind::form_dz:  // d_zbar Phi dzbar^dz = -d_zbar Phi dz^dzbar
      out.kind = Kind::form_dzdzbar;
      sign = -1.0;
      break;
    default: throw Error("d_double_prime: would produce a dzbar^dzbar component");
  }
  for (auto& p : out.planes) p = sign * spectral_apply(p, g.N, 1);
  return out;
}

// ===== Hermitian metric fields ==============================================

namespace {

// Grid-wide (min, max) eigenvalue of a pointwise-Hermitian field.
std::pair<double, double> eig_field_extrema(const MatrixField& H) {
  const int r = H.r;
  const long n = H.size();
  if (r == 1) {
    Eigen::VectorXd d = H.plane(0, 0).real();
    return {d.minCoeff(), d.maxCoeff()};
  }
  if (r == 2) {  // eigenvalues (tr +- sqrt(tr^2 - 4 det))/2, vectorized
    Eigen::VectorXd tr = (H.plane(0, 0) + H.plane(1, 1)).real();
    Eigen::VectorXd det = (H.plane(0, 0).cwiseProduct(H.plane(1, 1)) -
                           H.plane(0, 1).cwiseProduct(H.plane(1, 0)))
                              .real();
    Eigen::VectorXd disc = (tr.cwiseProduct(tr) - 4.0 * det).cwiseMax(0.0).cwiseSqrt();
    Eigen::VectorXd lo = 0.5 * (tr - disc), hi = 0.5 * (tr + disc);
    return {lo.minCoeff(), hi.maxCoeff()};
  }
  Eigen::VectorXd lo(n), hi(n);
  parallel_for(n, [&](long p) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.matrix_at(p), Eigen::EigenvaluesOnly);
    lo[p] = es.eigenvalues().minCoeff();
    hi[p] = es.eigenvalues().maxCoeff();
  });
  return {lo.minCoeff(), hi.maxCoeff()};
}

}  // namespace

std::pair<double, double> eig_range(const HermitianMetricField& h) {
  return eig_field_extrema(h.H);
}

HermitianMetricField::HermitianMetricField(MatrixField m) : H(std::move(m)) {
  if (H.kind != Kind::endomorphism) throw Error("metric field must be an endomorphism field");
  const int r = H.r;
  double scale = max_abs(H);
  double herm_defect = 0.0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      double d = (H.plane(i, j) - H.plane(j, i).conjugate()).cwiseAbs().maxCoeff();
      herm_defect = std::max(herm_defect, d);
    }
  if (herm_defect > 1e-12 * scale)
    throw Error("metric field is not Hermitian (defect " + std::to_string(herm_defect) + ")");
  // Positivity: smallest eigenvalue over the grid must be positive.
  double min_eig = eig_field_extrema(H).first;
  if (!(min_eig > 0.0))
    throw SpectrumNotPositive("metric field is not positive definite (min eigenvalue " +
                              std::to_string(min_eig) + ")");
}

HermitianMetricField identity_metric(const TorusGeometry& g, int rank) {
  return HermitianMetricField(identity_field(g, rank));
}

HermitianMetricField conformal_scale(const ScalarField& u, const HermitianMetricField& h) {
  ScalarField eu;
  eu.N = u.N;
  eu.v = u.v.array().exp().matrix();
  return HermitianMetricField(scale_by(eu, h.H));
}

bool is_selfadjoint(const MatrixField& A, const HermitianMetricField& h, double tol) {
  require_compatible(A, h.H);
  MatrixField HA = h.H * A;
  double defect = max_abs(HA - conj_transpose(HA));
  return defect <= tol * std::max(1.0, max_abs(HA));
}

void require_selfadjoint(const MatrixField& A, const HermitianMetricField& h, double tol,
                         const char* who) {
  if (!is_selfadjoint(A, h, tol))
    throw SelfadjointnessViolation(std::string(who) + ": operand is not selfadjoint for the metric");
}

// ===== eigenframe machinery ==================================================

namespace {

// Pointwise H^{1/2} and H^{-1/2} of a metric, via the Hermitian eigensystem.
struct MetricRoots {
  MatrixField sqrt;
  MatrixField inv_sqrt;
};

MetricRoots metric_roots(const HermitianMetricField& h) {
  const int r = h.rank();
  MetricRoots out{h.H, h.H};
  const long n = h.H.size();
  if (r == 1) {
    out.sqrt.plane(0, 0) = h.H.plane(0, 0).real().cwiseSqrt().cast<cxd>();
    out.inv_sqrt.plane(0, 0) = out.sqrt.plane(0, 0).cwiseInverse();
    return out;
  }
  parallel_for(n, [&](long p) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.H.matrix_at(p));
    Eigen::VectorXd lam = es.eigenvalues();
    Eigen::MatrixXcd U = es.eigenvectors();
    Eigen::VectorXd rt = lam.cwiseSqrt();
    out.sqrt.set_matrix_at(p, U * rt.asDiagonal() * U.adjoint());
    out.inv_sqrt.set_matrix_at(p, U * rt.cwiseInverse().asDiagonal() * U.adjoint());
  });
  return out;
}

}  // namespace

HermitianMetricField mat_exp_selfadjoint(const MatrixField& S, const HermitianMetricField& base) {
  require_compatible(S, base.H);
  require_selfadjoint(S, base, 1e-10, "mat_exp_selfadjoint");
  const int r = S.r;
  MatrixField out = base.H;
  if (r == 1) {
    out.plane(0, 0) =
        base.H.plane(0, 0).cwiseProduct(S.plane(0, 0).real().array().exp().matrix().cast<cxd>());
    return HermitianMetricField(std::move(out));
  }
  MetricRoots roots = metric_roots(base);
  parallel_for(S.size(), [&](long p) {
    // T = H^{1/2} S H^{-1/2} is Hermitian when S is base-selfadjoint; the
    // result H^{1/2} exp(T) H^{1/2} is Hermitian positive definite exactly.
    Eigen::MatrixXcd rt = roots.sqrt.matrix_at(p);
    Eigen::MatrixXcd irt = roots.inv_sqrt.matrix_at(p);
    Eigen::MatrixXcd T = rt * S.matrix_at(p) * irt;
    T = 0.5 * (T + T.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T);
    Eigen::MatrixXcd eT = es.eigenvectors() *
                          es.eigenvalues().array().exp().matrix().asDiagonal() *
                          es.eigenvectors().adjoint();
    Eigen::MatrixXcd Hnew = rt * eT * rt;
    out.set_matrix_at(p, 0.5 * (Hnew + Hnew.adjoint().eval()));
  });
  return HermitianMetricField(std::move(out));
}

MatrixField mat_log_metric(const HermitianMetricField& h, const HermitianMetricField& base) {
  require_compatible(h.H, base.H);
  const int r = h.rank();
  MatrixField S(h.H);
  S.kind = Kind::endomorphism;
  if (r == 1) {
    Eigen::VectorXd ratio = (h.H.plane(0, 0).real().array() / base.H.plane(0, 0).real().array());
    if (!(ratio.minCoeff() > 0.0))
      throw SpectrumNotPositive("mat_log_metric: metrics are not comparable");
    S.plane(0, 0) = ratio.array().log().matrix().cast<cxd>();
    return S;
  }
  MetricRoots roots = metric_roots(base);
  std::vector<char> bad(static_cast<size_t>(h.H.size()), 0);
  parallel_for(h.H.size(), [&](long p) {
    // W = B^{-1/2} H B^{-1/2} is Hermitian positive; S = B^{-1/2} log(W) B^{1/2}
    // is the base-selfadjoint logarithm of B^{-1} H.
    Eigen::MatrixXcd irt = roots.inv_sqrt.matrix_at(p);
    Eigen::MatrixXcd rt = roots.sqrt.matrix_at(p);
    Eigen::MatrixXcd W = irt * h.H.matrix_at(p) * irt;
    W = 0.5 * (W + W.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(W);
    if (!(es.eigenvalues().minCoeff() > 0.0)) {
      bad[p] = 1;
      return;
    }
    Eigen::MatrixXcd logW = es.eigenvectors() *
                            es.eigenvalues().array().log().matrix().asDiagonal() *
                            es.eigenvectors().adjoint();
    S.set_matrix_at(p, irt * logW * rt);
  });
  for (char b : bad)
    if (b) throw SpectrumNotPositive("mat_log_metric: relative spectrum is not positive");
  return S;
}

MatrixField apply_two_var(const MatrixField& s, const MatrixField& A,
                          const std::function<double(double, double)>& psi,
                          const HermitianMetricField& base) {
  require_compatible(s, A);
  require_compatible(s, base.H);
  require_selfadjoint(s, base, 1e-10, "apply_two_var");
  const int r = s.r;
  MatrixField out = A;
  if (r == 1) {
    // Single eigenvalue: multiply by psi(lambda, lambda).
    for (long p = 0; p < s.size(); ++p) {
      double lam = s.plane(0, 0)[p].real();
      out.plane(0, 0)[p] = A.plane(0, 0)[p] * psi(lam, lam);
    }
    return out;
  }
  MetricRoots roots = metric_roots(base);
  parallel_for(s.size(), [&](long p) {
    Eigen::MatrixXcd rt = roots.sqrt.matrix_at(p);
    Eigen::MatrixXcd irt = roots.inv_sqrt.matrix_at(p);
    Eigen::MatrixXcd T = rt * s.matrix_at(p) * irt;
    T = 0.5 * (T + T.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T);
    const Eigen::VectorXd lam = es.eigenvalues();
    // Base-orthonormal eigenvectors of s are V = B^{-1/2} U, V^{-1} = U^dag B^{1/2}.
    Eigen::MatrixXcd V = irt * es.eigenvectors();
    Eigen::MatrixXcd Vinv = es.eigenvectors().adjoint() * rt;
    Eigen::MatrixXcd At = Vinv * A.matrix_at(p) * V;
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) At(i, j) *= psi(lam[i], lam[j]);
    out.set_matrix_at(p, V * At * Vinv);
  });
  return out;
}

double psi_simpson(double x1, double x2) {
  const double u = x2 - x1;
  if (std::abs(u) < 1e-3) {
    // Taylor branch: (e^u - u - 1)/u^2 = 1/2 + u/6 + u^2/24 + u^3/120 + u^4/720.
    return 0.5 + u * (1.0 / 6.0 + u * (1.0 / 24.0 + u * (1.0 / 120.0 + u / 720.0)));
  }
  return (std::expm1(u) - u) / (u * u);
}

NormTriple norm_family(const MatrixField& A, const HermitianMetricField& h,
                       const TorusGeometry& g) {
  require_same_grid(A, g);
  require_compatible(A, h.H);
  require_selfadjoint(A, h, 1e-8, "norm_family");
  // |A|^2 = tr(A A^{*h}) = tr(A H^-1 A^dag H), real for h-selfadjoint A.
  MatrixField prod = A * (pointwise_inverse(h.H) * conj_transpose(A) * h.H);
  Eigen::VectorXd sq = trace(prod).v.real().cwiseMax(0.0);
  Eigen::VectorXd absA = sq.cwiseSqrt();
  const double cell = g.volume() / static_cast<double>(g.size());
  NormTriple out;
  out.l1 = absA.sum() * cell;
  out.l2 = std::sqrt(sq.sum() * cell);
  out.linf = absA.maxCoeff();
  return out;
}

std::pair<double, double> scalar_log_bound(const std::vector<double>& a) {
  if (a.empty()) throw Error("scalar_log_bound: empty vector");
  double sumsq = 0.0, sumexp = 0.0;
  for (double x : a) {
    sumsq += x * x;
    sumexp += std::exp(x) + std::exp(-x);
  }
  const double lhs = std::sqrt(sumsq);
  const double rhs = std::sqrt(static_cast<double>(a.size())) * std::log(sumexp);
  return {lhs, rhs};
}

}  // namespace hf
