#include "higgsflow/catalog.hpp"

#include <cmath>

namespace hf {

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"flat_unitary_r2", 2, rat(0), rat(0), Stability::polystable,
       "trivial direct sum of two flat degree-0 line bundles, phi = 0; every sub-line "
       "has slope 0 = mu(E), and the sum is phi-invariant"},
      {"nilpotent_higgs_r2", 2, rat(0), rat(0), Stability::semistable_not_stable,
       "phi = e12 dz with phi(e1) = 0: span(e1) is a phi-invariant sub-line of slope "
       "0 = mu(E); equality is attained yet E is not a phi-invariant direct sum "
       "(phi is nilpotent and nonzero)"},
      {"conformal_line", 1, rat(0), rat(0), Stability::stable,
       "line bundle (no proper subobjects); H0 = e^{cos x} is a conformal deformation "
       "of the flat metric with mean curvature (1/2) cos x"},
      {"oscillating_line", 1, rat(0), rat(0), Stability::stable,
       "line bundle with dbar-coefficient alpha = (1/2) e^{ix} dzbar; the mean "
       "curvature -sin x integrates to zero, so the degree is 0"},
      {"split_sum_r2", 2, rat(0), rat(0), Stability::polystable,
       "direct sum of two conformal degree-0 line bundles, H0 = diag(e^{cos x}, "
       "e^{-cos x}), phi = 0; both summands have slope 0 = mu(E)"},
  };
  return entries;
}

const CatalogEntry& catalog_lookup(const std::string& name) {
  for (const CatalogEntry& e : catalog_entries())
    if (e.name == name) return e;
  throw UnknownEntry("no catalog entry named '" + name + "'");
}

BuiltBundle build(const std::string& name, const TorusGeometry& g) {
  const CatalogEntry& entry = catalog_lookup(name);  // UnknownEntry on miss

  if (entry.name == "flat_unitary_r2") {
    HiggsBundle b(trivial_structure(g, 2), zero_field(g, 2, Kind::form_dz), entry.name);
    return BuiltBundle{std::move(b), identity_metric(g, 2)};
  }
  if (entry.name == "nilpotent_higgs_r2") {
    Eigen::MatrixXcd e12 = Eigen::MatrixXcd::Zero(2, 2);
    e12(0, 1) = 1.0;
    HiggsBundle b(trivial_structure(g, 2), constant_field(g, e12, Kind::form_dz), entry.name);
    return BuiltBundle{std::move(b), identity_metric(g, 2)};
  }
  if (entry.name == "conformal_line") {
    HiggsBundle b(trivial_structure(g, 1), zero_field(g, 1, Kind::form_dz), entry.name);
    MatrixField H(g, 1, Kind::endomorphism);
    H.plane(0, 0) = sample_scalar(g, [](double x, double) { return cxd(std::exp(std::cos(x)), 0.0); }).v;
    return BuiltBundle{std::move(b), HermitianMetricField(std::move(H))};
  }
  if (entry.name == "oscillating_line") {
    MatrixField alpha(g, 1, Kind::form_dzbar);
    // Amplitude 1/2 keeps the flat limit e^{2 sin x} resolvable on the
    // default 32-point grid (the Fourier tail of e^{4 sin x} is not).
    alpha.plane(0, 0) = sample_scalar(g, [](double x, double) {
                          return 0.5 * std::exp(cxd(0.0, x));
                        }).v;
    HiggsBundle b(HolomorphicStructure(g, std::move(alpha)), zero_field(g, 1, Kind::form_dz),
                  entry.name);
    return BuiltBundle{std::move(b), identity_metric(g, 1)};
  }
  if (entry.name == "split_sum_r2") {
    HiggsBundle b(trivial_structure(g, 2), zero_field(g, 2, Kind::form_dz), entry.name);
    MatrixField H(g, 2, Kind::endomorphism);
    H.plane(0, 0) = sample_scalar(g, [](double x, double) { return cxd(std::exp(std::cos(x)), 0.0); }).v;
    H.plane(1, 1) = sample_scalar(g, [](double x, double) { return cxd(std::exp(-std::cos(x)), 0.0); }).v;
    return BuiltBundle{std::move(b), HermitianMetricField(std::move(H))};
  }
  throw UnknownEntry("entry '" + name + "' is registered but has no builder");
}

rat check_sequence_balance(const SequenceData& F, const SequenceData& E, const SequenceData& G) {
  if (F.rank <= 0 || G.rank <= 0 || E.rank <= 0)
    throw InconsistentSequence("sequence terms must have positive rank");
  if (E.rank != F.rank + G.rank || E.degree != F.degree + G.degree)
    throw InconsistentSequence("rank or degree does not add up across the sequence");
  rat muE = E.degree / E.rank;
  rat muF = F.degree / F.rank;
  rat muG = G.degree / G.rank;
  return rat(F.rank) * (muE - muF) + rat(G.rank) * (muE - muG);
}

}  // namespace hf
