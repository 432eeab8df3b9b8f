#ifndef FLOWCAT_MORSE_HPP
#define FLOWCAT_MORSE_HPP

#include "flowcat/flow_data.hpp"
#include "flowcat/homology.hpp"
#include "flowcat/linalg.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace flowcat {

// Closed simplicial complex. Cells are sorted vertex-index lists in canonical
// order (dimension, then lexicographic); the face omitting position i has
// incidence sign (-1)^i.
struct SimplicialComplex {
  std::vector<std::string> vertices;
  std::vector<std::vector<int>> cells;
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<std::pair<int, int>>> faces;    // (cell, sign)
  std::vector<std::vector<std::pair<int, int>>> cofaces;  // (cell, sign)

  int size() const { return static_cast<int>(cells.size()); }
  int dim(int c) const { return static_cast<int>(cells[c].size()) - 1; }
  std::string name(int c) const;
  int find(const std::vector<std::string>& labels) const;  // -1 if absent
  std::vector<int> maximal() const;
};

SimplicialComplex complex_from_simplices(const std::vector<std::vector<std::string>>& simplices);
// A JSON list of maximal simplices, or {"simplices": [...]}.
SimplicialComplex parse_complex(const nlohmann::json& j);
nlohmann::json complex_to_json(const SimplicialComplex& K);

struct Matching {
  std::vector<std::pair<int, int>> pairs;  // (σ, τ), σ a facet of τ
};

// A list of [σ, τ] pairs of vertex-label lists, or the string "greedy".
Matching parse_matching(const SimplicialComplex& K, const nlohmann::json& j);
nlohmann::json matching_to_json(const SimplicialComplex& K, const Matching& V);
// Lexicographic free-face collapses; when stuck, the last remaining maximal
// cell becomes critical.
Matching greedy_matching(const SimplicialComplex& K);
// Same collapsing scheme with seeded random choices; always acyclic.
Matching random_matching(const SimplicialComplex& K, std::uint64_t seed);

struct MatchingReport {
  bool ok = true;
  std::string reason;
  std::vector<int> cycle;  // cells on a directed cycle of the modified Hasse digraph
};
MatchingReport validate_matching(const SimplicialComplex& K, const Matching& V);

std::vector<int> critical_cells(const SimplicialComplex& K, const Matching& V);

// Gradient path from a critical k-cell to a critical (k-1)-cell with its
// signed weight.
struct GradientPath {
  std::vector<int> cells;  // σ, σ₁, τ₁, σ₂, τ₂, …, σ'
  int weight = 0;
};
std::vector<GradientPath> gradient_paths(const SimplicialComplex& K, const Matching& V, int critical_cell);

// Morse differential indexed by critical cells (canonical order).
IntMatrix morse_differential_paths(const SimplicialComplex& K, const Matching& V);
IntMatrix morse_differential_flow(const SimplicialComplex& K, const Matching& V);
// One column of the flow recursion; used by the parallel kernel.
std::vector<BigInt> morse_flow_column(const SimplicialComplex& K, const Matching& V, const std::vector<int>& crit_pos,
                                      int critical_cell);

struct MorseFlowOutput {
  FlowCategory category;
  std::vector<int> critical;
  bool reconstructed = true;  // 1-dimensional data from the cancellation pairing
};
MorseFlowOutput morse_flow_category(const SimplicialComplex& K, const Matching& V);

// Stabilised flow Φ^∞ with Φ = 1 + ∂V + V∂, as a square matrix on all cells.
IntMatrix flow_limit(const SimplicialComplex& K, const Matching& V);
// ι: Morse chains → simplicial chains, π: simplicial chains → Morse chains.
IntMatrix morse_inclusion(const SimplicialComplex& K, const Matching& V);
IntMatrix morse_projection(const SimplicialComplex& K, const Matching& V);
IntMatrix continuation_map(const SimplicialComplex& K, const Matching& V0, const Matching& V1);
// h with d h + h d = 1 - Φ₁₀Φ₀₁ on the V0 Morse complex.
IntMatrix continuation_homotopy(const SimplicialComplex& K, const Matching& V0, const Matching& V1);

FlowBimodule continuation_bimodule(const SimplicialComplex& K, const Matching& V0, const Matching& V1);

// Chain map of the simplicial map K → L given on vertex labels (rows: cells
// of L); simplices with a degenerate image go to 0.
IntMatrix simplicial_chain_map(const SimplicialComplex& K, const SimplicialComplex& L,
                               const std::map<std::string, std::string>& vertex_map);
// Bimodule between the Morse categories with chain map π_L ∘ f ∘ ι_K.
FlowBimodule simplicial_map_bimodule(const SimplicialComplex& K, const Matching& VK, const SimplicialComplex& L,
                                     const Matching& VL, const std::map<std::string, std::string>& vertex_map);

ChainComplex simplicial_chain_complex(const SimplicialComplex& K, Ring ring);
// Oracle: its own Smith reduction, independent of the homology module.
HomologyResult simplicial_homology(const SimplicialComplex& K, Ring ring);

}  // namespace flowcat

#endif
