#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "higgsflow/catalog.hpp"
#include "higgsflow/flow.hpp"

using namespace hf;
using doctest::Approx;

TEST_CASE("registry contents") {
  const auto& entries = catalog_entries();
  CHECK(entries.size() == 5);

  std::set<std::string> names;
  for (const auto& e : entries) {
    names.insert(e.name);
    CHECK(e.rank >= 1);
    CHECK(e.slope_ == slope(e.degree, e.rank));
    CHECK(e.degree == rat(0));  // every entry lives on the trivial smooth bundle
    CHECK_FALSE(e.justification.empty());
  }
  CHECK(names.count("flat_unitary_r2") == 1);
  CHECK(names.count("nilpotent_higgs_r2") == 1);
  CHECK(names.count("conformal_line") == 1);
  CHECK(names.count("oscillating_line") == 1);
  CHECK(names.count("split_sum_r2") == 1);

  CHECK(catalog_lookup("nilpotent_higgs_r2").status == Stability::semistable_not_stable);
  CHECK(catalog_lookup("flat_unitary_r2").status == Stability::polystable);
  CHECK(catalog_lookup("conformal_line").status == Stability::stable);
  CHECK_THROWS_AS(catalog_lookup("not_a_bundle"), UnknownEntry);
  CHECK_THROWS_AS(build("not_a_bundle", TorusGeometry(8)), UnknownEntry);
}

TEST_CASE("every entry builds valid grid objects") {
  TorusGeometry g(16);
  for (const auto& e : catalog_entries()) {
    BuiltBundle bb = build(e.name, g);
    CHECK(bb.bundle.rank() == e.rank);
    CHECK(bb.bundle.label == e.name);
    CHECK_NOTHROW(require_valid(bb.bundle, g));
    CHECK(bb.h0.rank() == e.rank);
    CHECK(eig_range(bb.h0).first > 0.0);
    // Degree zero also holds numerically for the built structure.
    CHECK(std::abs(degree_chern_weil(bb.bundle.hol, bb.h0, g)) < 1e-10);
  }
}

TEST_CASE("built bundles have their advertised curvature") {
  TorusGeometry g(32);

  // flat_unitary_r2 starts flat.
  BuiltBundle flat = build("flat_unitary_r2", g);
  CHECK(hym_residual(flat.bundle, flat.h0, 0.0, g).norms.linf < 1e-14);

  // nilpotent_higgs_r2 starts at max |K| = 2 sqrt(2).
  BuiltBundle nil = build("nilpotent_higgs_r2", g);
  CHECK(hym_residual(nil.bundle, nil.h0, 0.0, g).norms.linf ==
        Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));

  // conformal_line: K = box0(cos x) = cos(x)/2, so max |K| = 1/2.
  BuiltBundle conf = build("conformal_line", g);
  CHECK(hym_residual(conf.bundle, conf.h0, 0.0, g).norms.linf == Approx(0.5).epsilon(1e-11));

  // oscillating_line: alpha = (1/2) e^{ix} gives K = -sin x.
  BuiltBundle osc = build("oscillating_line", g);
  CHECK(hym_residual(osc.bundle, osc.h0, 0.0, g).norms.linf == Approx(1.0).epsilon(1e-11));

  // split_sum_r2: K = diag(cos x, -cos x)/2.
  BuiltBundle split = build("split_sum_r2", g);
  MatrixField K = mean_curvature(split.bundle, split.h0, g);
  ScalarField want = sample_scalar(g, [](double x, double) { return cxd(0.5 * std::cos(x), 0.0); });
  CHECK((K.plane(0, 0) - want.v).cwiseAbs().maxCoeff() < 1e-11);
  CHECK((K.plane(1, 1) + want.v).cwiseAbs().maxCoeff() < 1e-11);
  CHECK(max_abs(K) == Approx(0.5).epsilon(1e-11));
}

TEST_CASE("normalization leaves catalog starts consistent with their status") {
  // Every registered entry flows toward a flat metric; the two line entries
  // and the conformal factors normalize away entirely.
  TorusGeometry g(32);
  for (const char* name : {"conformal_line", "oscillating_line"}) {
    BuiltBundle bb = build(name, g);
    HermitianMetricField hn = conformal_normalize(bb.h0, bb.bundle, g, 0.0);
    CHECK(hym_residual(bb.bundle, hn, 0.0, g).norms.linf < 1e-8);
  }
}

TEST_CASE("exact-sequence slope balance") {
  // (deg, rk) triples F, E, G with additive data balance exactly.
  auto bal = [](long long df, long long rf, long long de, long long re, long long dg,
                long long rg) {
    return check_sequence_balance({rat(df), rf}, {rat(de), re}, {rat(dg), rg});
  };
  CHECK(bal(0, 1, 0, 2, 0, 1) == rat(0));
  CHECK(bal(1, 1, 0, 2, -1, 1) == rat(0));
  CHECK(bal(2, 1, 0, 3, -2, 2) == rat(0));
  CHECK(bal(3, 2, 5, 5, 2, 3) == rat(0));

  // Non-additive data is rejected.
  CHECK_THROWS_AS(bal(1, 1, 0, 2, 0, 1), InconsistentSequence);
  CHECK_THROWS_AS(bal(0, 1, 0, 3, 0, 1), InconsistentSequence);
  CHECK_THROWS_AS(check_sequence_balance({rat(0), 0}, {rat(0), 1}, {rat(0), 1}),
                  InconsistentSequence);
}
