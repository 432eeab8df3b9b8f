#ifndef FLOWCAT_FLOW_DATA_HPP
#define FLOWCAT_FLOW_DATA_HPP

#include "flowcat/error.hpp"
#include "flowcat/linalg.hpp"
#include "flowcat/numeric.hpp"
#include "flowcat/strat_arcs.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace flowcat {

struct VirtualDim {
  int plus = 0;
  int minus = 0;
  int value() const { return plus - minus; }
  bool operator==(const VirtualDim&) const = default;
};

struct FlowObject {
  std::string id;
  VirtualDim v;
  int dim = 0;
  bool operator==(const FlowObject&) const = default;
};

// Faces of Δⁿ as vertex bitmasks.
using Face = std::uint32_t;

std::vector<int> face_vertices(Face f);
Face face_from_vertices(const std::vector<int>& v);
std::string format_face(Face f);

enum class FacetKind { Break, Forget };

// One boundary piece: a product of components (two for a break, one for a
// forget-vertex facet), with orientation sign and the rank added by the
// strong equivalence onto the product.
struct FacetEntry {
  std::vector<std::string> parts;
  int sign = 1;
  int added_rank = 0;
  bool operator==(const FacetEntry&) const = default;
};

// Break: codim-1 stratum where the arc breaks at `object` of set `vertex`
// (normal direction Q⁻ = {object}). Forget: vertex `vertex` is forgotten
// (normal direction Q⁺ = {vertex}).
struct Facet {
  FacetKind kind = FacetKind::Break;
  int vertex = 0;
  std::string object;
  std::vector<FacetEntry> entries;
  bool operator==(const Facet&) const = default;
};

struct Component {
  std::string id;
  std::string source, target;
  Rational energy = 0;
  int total_dim = 0;
  int obstruction_rank = 0;
  BigInt count = 0;  // used when vdim() == 0
  bool facets_available = true;
  std::vector<Facet> facets;

  int vdim() const { return total_dim - obstruction_rank; }
  bool operator==(const Component&) const = default;
};

// Flow n-simplex. Cell σ holds the components of X_σ(p, r) for p in the set
// of min σ and r in the set of max σ. Facet data is complete for every
// component of virtual dimension ≤ truncation.
struct FlowSimplex {
  GammaSpec gamma;
  int truncation = 1;
  bool signs = true;
  std::vector<std::vector<FlowObject>> sets;
  std::map<Face, std::vector<Component>> cells;

  int n() const { return static_cast<int>(sets.size()) - 1; }
  std::optional<int> object_index(int set, const std::string& id) const;
  const FlowObject& object(int set, const std::string& id) const;
  const std::vector<Component>& cell(Face f) const;
  const Component* find(Face f, const std::string& id) const;
  std::size_t component_count() const;

  bool operator==(const FlowSimplex&) const = default;
};

using FlowCategory = FlowSimplex;  // n = 0
using FlowBimodule = FlowSimplex;  // n = 1

FlowCategory make_category(std::vector<FlowObject> objects, GammaSpec gamma = {});
// Sorts components by id, facets by (kind, vertex, object), entries by parts.
void canonicalize(FlowSimplex& S);

// Orientation signs of boundary pieces inside a cell with positions 0..m:
// break at position k, forget-vertex at position i.
int break_sign(int k, int m);
int forget_sign(int i, int m);

Report validate_simplex(const FlowSimplex& S, Ring ring = Ring::Z);
Report validate_flow_category(const FlowCategory& F, Ring ring = Ring::Z);
Report validate_bimodule(const FlowBimodule& B, Ring ring = Ring::Z);

// Sum over energies of the counts of virtual-dimension-0 components of cell
// f, as a matrix (rows: targets, columns: sources).
IntMatrix count_matrix(const FlowSimplex& S, Face f);

// Adds 1-dimensional components to cell f whose boundaries pair the
// codim-1 pieces of opposite sign made of 0-dimensional components (counts
// must be ±1 or 0). Throws CheckFailure if the pieces over some
// (source, target, energy) do not cancel.
void fill_intervals(FlowSimplex& S, Face f, const std::string& id_prefix);

// Sub-simplex category of faces avoiding vertex i.
FlowSimplex face(const FlowSimplex& S, int i);
// Degeneracies duplicating the first / last vertex.
FlowSimplex s0(const FlowSimplex& S);
FlowSimplex sn(const FlowSimplex& S);
FlowBimodule diagonal(const FlowCategory& F);

FlowSimplex restrict_objects(const FlowSimplex& S, const std::function<bool(int, const FlowObject&)>& keep);
FlowCategory restrict_objects(const FlowCategory& F, const std::function<bool(const FlowObject&)>& keep);

// sign = +1: V⁺ gains a summand; sign = -1: V⁻ does. Counts in cells with
// an odd number of vertices change sign.
FlowSimplex suspend(const FlowSimplex& S, int sign);

struct ConeResult {
  FlowCategory cone;
  FlowBimodule inclusion;   // Y → C
  FlowBimodule projection;  // C → ΣX
  Rational energy_shift = 0;
};

// Objects "X/<id>" (suspended) and "Y/<id>".
ConeResult cone(const FlowBimodule& B);

// Bimodule with the given left and right categories and no components.
FlowBimodule empty_bimodule(const FlowCategory& X, const FlowCategory& Y);
FlowCategory endpoint(const FlowSimplex& S, int vertex);

nlohmann::json simplex_to_json(const FlowSimplex& S);
nlohmann::json category_to_json(const FlowCategory& F);
// Accepts flowcat-category-v1 and flowcat-simplex-v1.
FlowSimplex simplex_from_json(const nlohmann::json& j);
std::string simplex_to_dot(const FlowSimplex& S);

}  // namespace flowcat

#endif
