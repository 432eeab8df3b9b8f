#ifndef FLOWCAT_STRAT_ARCS_HPP
#define FLOWCAT_STRAT_ARCS_HPP

#include "flowcat/corner_model.hpp"
#include "flowcat/numeric.hpp"

#include <nlohmann/json.hpp>

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace flowcat {

enum class GammaKind { Trivial, NonnegRational };

struct GammaSpec {
  GammaKind kind = GammaKind::Trivial;
  Rational energy(const Rational& g) const { return kind == GammaKind::Trivial ? Rational(0) : g; }
  bool operator==(const GammaSpec&) const = default;
};

std::string gamma_name(const GammaSpec& g);
GammaSpec gamma_from_name(const std::string& s);

// Element `index` of object set `set`.
struct Element {
  int set = 0;
  int index = 0;
  auto operator<=>(const Element&) const = default;
};

// Bit m set ⇔ interior index m is in the label.
using LabelSet = std::uint32_t;

struct ArcVertex {
  LabelSet label = 0;
  Rational energy = 0;
  bool operator==(const ArcVertex&) const = default;
};

// Directed arc e₀ - v₁ - e₁ - … - v_d - e_d; vertices[i] sits between
// edges[i] and edges[i+1].
struct Arc {
  std::vector<Element> edges;
  std::vector<ArcVertex> vertices;

  int internal_edges() const { return static_cast<int>(edges.size()) - 2; }
  Rational total_energy() const;
  bool operator==(const Arc&) const = default;
};

// Canonical order: codim is applied by callers; this is the lexicographic part.
bool arc_less(const Arc& a, const Arc& b);
struct ArcLess {
  bool operator()(const Arc& a, const Arc& b) const { return arc_less(a, b); }
};

struct Sequence {
  std::vector<std::vector<std::string>> sets;

  int n() const { return static_cast<int>(sets.size()) - 1; }
  const std::string& name(const Element& e) const { return sets.at(e.set).at(e.index); }
  bool unique_names() const;
  std::string label(const Element& e) const;
  Element element(int set, const std::string& name) const;
};

// Interior indices strictly between the two set indices.
LabelSet range_mask(int lo, int hi);

std::string format_arc(const Sequence& seq, const Arc& a);
void validate_arc(const Sequence& seq, const GammaSpec& gamma, const Arc& a);

int codim(const Arc& a);
// Interior indices with no edge of that set and in no vertex label.
LabelSet free_indices(const Arc& a);
// Interior indices used by some edge.
LabelSet edge_sets(const Arc& a);

// An arrow α → β is recorded relative to its target β: the internal edges of
// β that are collapsed (bit i = edges[i+1]) and the free indices of β added
// to vertex labels.
struct ArcArrow {
  std::uint32_t collapsed = 0;
  LabelSet added = 0;
  auto operator<=>(const ArcArrow&) const = default;
};

// Source of the arrow (target, f).
Arc apply_arrow(const Arc& target, const ArcArrow& f);
// g∘f for f into β and g: β → γ, both relative to their targets.
ArcArrow compose_arrows(const Arc& gamma, const ArcArrow& g, const ArcArrow& f);

// Collapse internal edges of `a` and assign the given labels to the merged
// vertices (one per resulting vertex). Checks that each label contains the
// union of the collapsed labels, the fully-collapsed set indices, and stays
// in range; energies of merged vertices are summed.
Arc collapse(const Sequence& seq, const Arc& a, std::uint32_t collapsed_edges,
             const std::vector<LabelSet>& new_labels);

Arc compose_arcs(const Arc& a, const Arc& b);
Arc minimal_arc(const Element& p, const Element& r, const Rational& energy = 0);

struct ArcCategory {
  Sequence sequence;
  GammaSpec gamma;
  Element source, target;
  Rational grade = 0;
  // Nonneg-rational only: allowed vertex-energy vectors, each summing to the
  // grade. Arcs use these or any coarsening of them (consecutive partial sums).
  std::vector<std::vector<Rational>> decompositions;
};

std::vector<Arc> enumerate_objects(const ArcCategory& C, int max_codim);

struct ArcCategoryData {
  std::vector<Arc> arcs;  // canonical order
  std::map<Arc, int, ArcLess> index;
  CornerCategory category;
  // arrow of `category` -> (target arc index, arrow data); identities included
  std::vector<std::pair<int, ArcArrow>> arrows;
};

ArcCategoryData build_arc_category(const ArcCategory& C, int max_codim);

enum class Codim1Kind { ForgetVertex, Break };

struct Codim1Object {
  Arc arc;
  Codim1Kind kind = Codim1Kind::Break;
  int forgotten = -1;  // interior index k for ForgetVertex
  Element broken{};    // q for Break
  Rational left_energy = 0, right_energy = 0;
  LabelSet q_plus = 0;                 // {k} for ForgetVertex
  std::vector<Element> q_minus;        // {q} for Break
};

std::vector<Codim1Object> enumerate_codim1(const ArcCategory& C);

// Sequence with set i removed.
Sequence face_sequence(const Sequence& seq, int i);
// Does the arc avoid set i (no edge from it, i in no label)?
bool avoids(const Arc& a, int i);
// Arc of ∂ⁱ viewed in the full sequence, and back.
Arc include_face_arc(const Arc& a, int i);
Arc restrict_face_arc(const Arc& a, int i);

// All arcs of codim ≤ max_codim between every pair (p ∈ P_j, r ∈ P_ℓ), j ≤ ℓ.
struct SequenceArcs {
  Sequence sequence;
  int max_codim = 0;
  std::vector<Arc> arcs;
  std::vector<std::tuple<int, int, ArcArrow>> arrows;  // (source idx, target idx, data)
};

SequenceArcs enumerate_sequence(const Sequence& seq, int max_codim);
// Sub-arc-category on arcs avoiding set i, reindexed to ∂ⁱ of the sequence.
// Codims drop by one for pairs whose range contains i, so the result is
// complete up to max_codim − 1.
SequenceArcs face(const SequenceArcs& S, int i);
// Exhaustive check of ∂ⁱ∂ʲ = ∂^{j−1}∂ⁱ and of face = direct enumeration.
Report faces_check(const Sequence& seq, int max_codim);

// Horn condition for arcs from P_0 to P_n: no vertex between a P_0 edge and
// a P_n edge is labelled by {1,…,n−1} or by {1,…,n−1}∖{k}.
bool horn_membership(const Arc& a, int n, int k);

struct Block {
  int d = 0;
  int eps = 0;
  auto operator<=>(const Block&) const = default;
};

Block block_functor(const Arc& a, int n, int k);
// Same, but rejects arcs outside the horn.
Block block_functor_checked(const Arc& a, int n, int k);

nlohmann::json arc_to_json(const Sequence& seq, const Arc& a);
Arc arc_from_json(const Sequence& seq, const nlohmann::json& j);
nlohmann::json sequence_to_json(const Sequence& seq);
Sequence sequence_from_json(const nlohmann::json& j);
nlohmann::json arc_category_to_json(const ArcCategory& C);
ArcCategory arc_category_from_json(const nlohmann::json& j);
std::string arc_category_to_dot(const ArcCategory& C, const ArcCategoryData& data);

}  // namespace flowcat

#endif
