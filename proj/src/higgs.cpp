#include "higgsflow/higgs.hpp"

#include <algorithm>
#include <string>

namespace hf {

HiggsBundle::HiggsBundle(HolomorphicStructure h, MatrixField p, std::string lbl)
    : hol(std::move(h)), phi(std::move(p)), label(std::move(lbl)) {
  if (phi.kind != Kind::form_dz) throw Error("Higgs field must be a dz form");
  require_compatible(phi, hol.alpha);
}

double higgs_holomorphicity_residual(const HiggsBundle& b, const TorusGeometry& g) {
  require_same_grid(b.phi, g);
  // Phi dz is holomorphic for D'' = d_zbar + alpha iff d_zbar Phi + [alpha, Phi] = 0.
  MatrixField dphi = b.phi;
  dphi.kind = Kind::endomorphism;
  dphi = d_double_prime(dphi, g);
  MatrixField a = b.hol.alpha, p = b.phi;
  a.kind = Kind::endomorphism;
  p.kind = Kind::endomorphism;
  dphi.kind = Kind::endomorphism;
  return max_abs(dphi + commutator(a, p));
}

void require_valid(const HiggsBundle& b, const TorusGeometry& g) {
  if (b.phi.kind != Kind::form_dz) throw Error("Higgs field must be a dz form");
  require_compatible(b.phi, b.hol.alpha);
  double res = higgs_holomorphicity_residual(b, g);
  double scale = std::max(1.0, max_abs(b.phi));
  if (res > 1e-8 * scale)
    throw Error("Higgs field is not holomorphic for the given structure (residual " +
                std::to_string(res) + ")");
}

MatrixField higgs_adjoint(const MatrixField& phi, const HermitianMetricField& h) {
  require_compatible(phi, h.H);
  // M = H^{-1} Phi^dag H, the metric adjoint coefficient; a dzbar form.
  MatrixField M = pointwise_inverse(h.H) * conj_transpose(phi) * h.H;
  M.kind = Kind::form_dzbar;
  return M;
}

CurvatureField hs_curvature(const HiggsBundle& b, const HermitianMetricField& h,
                            const TorusGeometry& g) {
  CurvatureField F = chern_curvature(b.hol, h, g);
  // Full curvature of D'' + D'_h adds [Phi dz, M dzbar] + [M dzbar, Phi dz],
  // whose dz^dzbar coefficient is the plain commutator [Phi, M].
  MatrixField M = higgs_adjoint(b.phi, h);
  MatrixField p = b.phi, m = M;
  p.kind = Kind::endomorphism;
  m.kind = Kind::endomorphism;
  MatrixField bracket = commutator(p, m);
  bracket.kind = Kind::form_dzdzbar;
  F.F = F.F + bracket;
  return F;
}

MatrixField mean_curvature(const HiggsBundle& b, const HermitianMetricField& h,
                           const TorusGeometry& g) {
  CurvatureField F = hs_curvature(b, h, g);
  // K = i Lambda F; with Lambda(eta dz^dzbar) = -2i eta this is 2 eta.
  MatrixField K = 2.0 * F.F;
  K.kind = Kind::endomorphism;
  return K;
}

HymResidual hym_residual(const HiggsBundle& b, const HermitianMetricField& h, double c,
                         const TorusGeometry& g) {
  MatrixField K = mean_curvature(b, h, g);
  MatrixField dev = K - (cxd(c, 0.0) * identity_field(g, K.r));
  HymResidual out{dev, norm_family(dev, h, g)};
  return out;
}

}  // namespace hf
