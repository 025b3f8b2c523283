#include "higgsflow/bundle.hpp"

#include <numbers>

namespace hf {

HolomorphicStructure::HolomorphicStructure(const TorusGeometry& g, MatrixField a)
    : rank(a.r), alpha(std::move(a)) {
  require_same_grid(alpha, g);
  if (alpha.kind != Kind::form_dzbar)
    throw Error("holomorphic structure coefficient must be a dzbar form");
}

HolomorphicStructure trivial_structure(const TorusGeometry& g, int rank) {
  return HolomorphicStructure(g, zero_field(g, rank, Kind::form_dzbar));
}

MatrixField chern_connection_dz(const HolomorphicStructure& hol, const HermitianMetricField& h,
                                const TorusGeometry& g) {
  require_compatible(hol.alpha, h.H);
  // Compatibility with d = (d_z + P + A^{*h}) + (d_zbar + A) and the metric
  // forces P = H^{-1} d_z H - H^{-1} A^dag H.
  MatrixField Hinv = pointwise_inverse(h.H);
  MatrixField P = Hinv * d_prime(h.H, g) - Hinv * conj_transpose(hol.alpha) * h.H;
  P.kind = Kind::form_dz;
  return P;
}

CurvatureField chern_curvature(const HolomorphicStructure& hol, const HermitianMetricField& h,
                               const TorusGeometry& g) {
  MatrixField P = chern_connection_dz(hol, h, g);
  // dz^dzbar coefficient of d(theta) + theta^theta for theta = P dz + A dzbar:
  // F = d_z A - d_zbar P + [P, A].  d_double_prime on a dz form already returns
  // the oriented coefficient -d_zbar P, and the wedge of the two mixed terms
  // contracts to a plain commutator of the coefficients.
  MatrixField bracket = P;
  bracket.kind = Kind::endomorphism;
  MatrixField a_endo = hol.alpha;
  a_endo.kind = Kind::endomorphism;
  bracket = commutator(bracket, a_endo);
  bracket.kind = Kind::form_dzdzbar;
  MatrixField F = d_prime(hol.alpha, g) + d_double_prime(P, g) + bracket;
  return CurvatureField{F};
}

double degree_chern_weil(const HolomorphicStructure& hol, const HermitianMetricField& h,
                         const TorusGeometry& g) {
  // deg = (i/2pi) Int tr(F) dz^dzbar = (1/pi) Int tr(F) dx dy  (dz^dzbar = -2i dx dy).
  CurvatureField F = chern_curvature(hol, h, g);
  return integrate_real(trace(F.F), g) / std::numbers::pi;
}

rat slope(const rat& degree, long long rank) {
  if (rank <= 0) throw Error("slope: rank must be positive");
  return degree / rank;
}

MatrixField tensor_mean_curvature_combine(const MatrixField& K1, const MatrixField& K2) {
  if (K1.N != K2.N) throw ShapeMismatch("tensor combine: grids differ");
  if (K1.kind != Kind::endomorphism || K2.kind != Kind::endomorphism)
    throw Error("tensor combine expects endomorphism fields");
  const int r1 = K1.r, r2 = K2.r;
  TorusGeometry g(K1.N);
  MatrixField out(g, r1 * r2, Kind::endomorphism);
  // K1 (x) I + I (x) K2 with row-major pair index (a,i) -> a*r2 + i.
  for (int a = 0; a < r1; ++a)
    for (int b = 0; b < r1; ++b)
      for (int i = 0; i < r2; ++i)
        for (int j = 0; j < r2; ++j) {
          Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(out.plane(0, 0).size());
          if (i == j) acc += K1.plane(a, b);
          if (a == b) acc += K2.plane(i, j);
          out.plane(a * r2 + i, b * r2 + j) = std::move(acc);
        }
  return out;
}

MatrixField sum_mean_curvature_combine(const MatrixField& K1, const MatrixField& K2) {
  if (K1.N != K2.N) throw ShapeMismatch("sum combine: grids differ");
  if (K1.kind != Kind::endomorphism || K2.kind != Kind::endomorphism)
    throw Error("sum combine expects endomorphism fields");
  const int r1 = K1.r, r2 = K2.r;
  TorusGeometry g(K1.N);
  MatrixField out(g, r1 + r2, Kind::endomorphism);
  for (int a = 0; a < r1; ++a)
    for (int b = 0; b < r1; ++b) out.plane(a, b) = K1.plane(a, b);
  for (int i = 0; i < r2; ++i)
    for (int j = 0; j < r2; ++j) out.plane(r1 + i, r1 + j) = K2.plane(i, j);
  return out;
}

}  // namespace hf
