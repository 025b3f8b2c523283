// Registry of named example bundles with exact slope data and declared
// stability status. Statuses are certified by the listed invariant subobjects
// (exact rational arithmetic), not by a general subsheaf search.
#pragma once

#include <string>
#include <vector>

#include "higgsflow/higgs.hpp"

namespace hf {

enum class Stability { stable, semistable_not_stable, polystable };

struct CatalogEntry {
  std::string name;
  int rank = 0;
  rat degree{0};
  rat slope_{0};
  Stability status = Stability::polystable;
  std::string justification;
};

const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry& catalog_lookup(const std::string& name);  // UnknownEntry on miss

struct BuiltBundle {
  HiggsBundle bundle;
  HermitianMetricField h0;
};

// Instantiates a registered entry on the grid. Grid objects satisfy every
// bundle invariant (holomorphic phi, valid metric).
BuiltBundle build(const std::string& name, const TorusGeometry& g);

struct SequenceData {
  rat degree;
  long long rank;
};

// For a short exact sequence F -> E -> G (so rk and deg add up):
// rk(F)(mu(E) - mu(F)) + rk(G)(mu(E) - mu(G)), exactly; always 0.
rat check_sequence_balance(const SequenceData& F, const SequenceData& E, const SequenceData& G);

}  // namespace hf
