#ifndef FLOWCAT_HOMOLOGY_HPP
#define FLOWCAT_HOMOLOGY_HPP

#include "flowcat/flow_data.hpp"
#include "flowcat/linalg.hpp"

#include <map>
#include <string>
#include <vector>

namespace flowcat {

// Basis elements carry a degree; d is stored as one square matrix with
// d(i, j) = coefficient of basis element i in the boundary of j.
struct ChainComplex {
  Ring ring = Ring::Z;
  std::vector<std::string> labels;
  std::vector<int> degrees;
  IntMatrix d;

  int size() const { return static_cast<int>(labels.size()); }
  std::vector<int> basis_in_degree(int k) const;
  std::vector<int> degrees_present() const;
  // d restricted to C_k → C_{k-1}.
  IntMatrix block(int k) const;
};

struct HomologyGroup {
  int rank = 0;
  std::vector<BigInt> torsion;  // invariant factors > 1 (ℤ only)
  bool operator==(const HomologyGroup&) const = default;
};

struct HomologyResult {
  Ring ring = Ring::Z;
  std::map<int, HomologyGroup> groups;  // degrees with nonzero homology only

  HomologyGroup at(int k) const;
  bool operator==(const HomologyResult& o) const { return ring == o.ring && groups == o.groups; }
};

std::string format_group(const HomologyGroup& g, Ring ring);
std::string format_homology(const HomologyResult& h);

// Degree-preserving maps are stored as full matrices (rows: target basis).
struct ChainMap {
  IntMatrix m;
};

// Throws CheckFailure naming the pair where d² ≠ 0.
ChainComplex chain_complex(const FlowCategory& F, Ring ring);
ChainComplex make_complex(Ring ring, std::vector<std::string> labels, std::vector<int> degrees, IntMatrix d);
void check_d_squared(const ChainComplex& C);

HomologyResult homology(const ChainComplex& C);

// Count matrix of the bimodule; verifies d f = f d.
IntMatrix chain_map(const FlowBimodule& B, Ring ring);

// Cone(f)_k = X_{k-1} ⊕ Y_k with d(x, y) = (-dx, fx + dy); labels "X/…", "Y/…".
ChainComplex algebraic_cone(const ChainComplex& X, const ChainComplex& Y, const IntMatrix& f);

// Graded isomorphism A ≅ B given by a basis bijection with signs; empty if
// the complexes differ beyond relabelling and signs.
struct BasisIsomorphism {
  bool ok = false;
  std::vector<int> target;  // basis of A → basis of B
  std::vector<int> sign;
  std::string reason;
};
BasisIsomorphism match_by_labels(const ChainComplex& A, const ChainComplex& B);

// Exactness of H(A) → H(B) → H(C) at H(B), for chain maps g: A → B, h: B → C
// (full matrices). Subgroup equality im(g_*) = ker(h_*) degree by degree.
Report exactness_at(const ChainComplex& A, const IntMatrix& g, const ChainComplex& B, const IntMatrix& h,
                    const ChainComplex& C, const std::string& spot);

struct LesReport {
  Report report;
  HomologyResult hx, hy, hc;
};

// H(X) → H(Y) → H(C) → H(ΣX) → H(ΣY), exact at H(Y), H(C) and H(ΣX).
LesReport les_check(const FlowBimodule& B, Ring ring);

}  // namespace flowcat

#endif
