#ifndef FLOWCAT_BIMODULE_ALG_HPP
#define FLOWCAT_BIMODULE_ALG_HPP

#include "flowcat/flow_data.hpp"
#include "flowcat/linalg.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace flowcat {

struct CompositionResult {
  FlowBimodule composite;
  // composite component id → the products (left id, right id) glued into it
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> pieces;
  std::vector<std::string> notes;
};

// Glues products B12(p,q) × B23(q,r) along shared break facets through the
// middle category. Throws CheckFailure if the chain map is not the product.
CompositionResult compose_bimodules_detailed(const FlowBimodule& B12, const FlowBimodule& B23);
FlowBimodule compose_bimodules(const FlowBimodule& B12, const FlowBimodule& B23);

// Edges (0→1, 1→2, 0→2) placed into a 2-simplex with an empty top cell.
FlowSimplex assemble_two_simplex(const FlowBimodule& e01, const FlowBimodule& e12, const FlowBimodule& e02);

struct TwoSimplexHomotopy {
  FlowSimplex simplex;
  IntMatrix h;  // rows: set 2, columns: set 0
  IntMatrix f01, f12, f02;
};

// h from the virtual-dimension-0 top components; checks
// d h + h d = f02 - f12 f01. Throws CheckFailure with the residual.
TwoSimplexHomotopy homotopy_from_2simplex(const FlowSimplex& H, Ring ring = Ring::Z);

// Null-homotopies of I∘B on (X, Y, C), ΣB∘P on (C, ΣX, ΣY) and P∘I on
// (Y, C, ΣX).
FlowSimplex null_homotopy_IB(const FlowBimodule& B);
FlowSimplex null_homotopy_BP(const FlowBimodule& B);
FlowSimplex null_homotopy_PI(const FlowBimodule& B);

}  // namespace flowcat

#endif
