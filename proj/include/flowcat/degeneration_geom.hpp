#ifndef FLOWCAT_DEGENERATION_GEOM_HPP
#define FLOWCAT_DEGENERATION_GEOM_HPP

#include "flowcat/corner_model.hpp"
#include "flowcat/error.hpp"
#include "flowcat/flow_data.hpp"
#include "flowcat/linalg.hpp"
#include "flowcat/numeric.hpp"
#include "flowcat/strat_arcs.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace flowcat {

Rational default_epsilon();  // 1/2

// L_{d,0} = {x ∈ [0,1]^d : Πx ≤ ε}
// L_{d,1} = {(x,y) ∈ [0,1]^{d+1} : (1−y)² + Πx²/ε² ≤ 1}, y last.
struct LBlock {
  int d = 0;
  int flag = 0;
  Rational epsilon = default_epsilon();

  int dimension() const { return d + flag; }
};

bool lblock_contains(const LBlock& L, const std::vector<Rational>& point);
// L_{0,0} and L_{0,1} are empty, every other block is not.
bool lblock_nonempty(int d, int flag);

enum class LFacetKind { Zero, One, YOne, Hypersurface };

struct LFacet {
  LFacetKind kind = LFacetKind::Zero;
  int coord = -1;  // x coordinate (0-based) for Zero / One
  // gluing target for One and YOne
  int target_d = -1, target_flag = -1;
  // false when the facet is a formal copy of an empty block (x=1 on L_{1,0})
  bool nonempty = true;
  std::string tag;
};

// Facets in the order: x_j=0, x_j=1, y=1, hypersurface. The x_j=1 facets of
// L_{1,1} are dropped since L_{0,1} is empty; empty blocks have no facets.
std::vector<LFacet> lblock_facets(int d, int flag);

// Facets of L containing the point (which must lie in L).
std::vector<LFacet> classify_point(const LBlock& L, const std::vector<Rational>& point);

// Open face of L cut out by: x_j = 0 for j in zero, x_j = 1 for j in one,
// y = 1 if y_one, the hypersurface if hyper; all other facet conditions
// strict. Returns an exact witness, or nullopt if the face is empty.
struct LFace {
  std::uint32_t zero = 0, one = 0;
  bool y_one = false;
  bool hyper = false;
};
std::optional<std::vector<Rational>> face_witness(const LBlock& L, const LFace& f);

// Coface δ_j: L_{d−1,f} → L_{d,f} inserting x_j = 1; η: L_{d,0} → L_{d,1}
// appending y = 1.
std::vector<Rational> coface(const std::vector<Rational>& point, int j, int flag);
std::vector<Rational> flag_inclusion(const std::vector<Rational>& point);

struct CosimplicialReport {
  Report report;
  long points_checked = 0;
  long identities_checked = 0;
};

CosimplicialReport cosimplicial_check(int max_d, const Rational& epsilon = default_epsilon());

// ---- conic bundles ----

// Point of 𝕋ℙ¹, normalized to max(x, y) = 1.
struct TP1 {
  Rational x = 1, y = 0;
  bool operator==(const TP1&) const = default;
};

TP1 tp1(const Rational& x, const Rational& y);  // normalizes; throws on (0,0) or negatives
// (s : 1) for s ≤ 1, (1 : 1/s) for s ≥ 1; nullopt means s = ∞, i.e. (1 : 0).
TP1 tp1_from_ratio(const std::optional<Rational>& s);
std::optional<Rational> tp1_ratio(const TP1& z);  // x / y, nullopt for y = 0

// z has n+1 factors; checks x_{i−1} y_i = t_i y_{i−1} x_i for 1 ≤ i ≤ n and
// that each factor is normalized.
bool conic_contains(const std::vector<Rational>& t, const std::vector<TP1>& z);

struct ConicComponent {
  int index = 0;
  int window_lo = 0, window_hi = 0;  // factors on which projection is bijective
  std::vector<int> constant_factors;
  // x/y ratio of factor i is s · scale[i − window_lo]
  std::vector<Rational> scale;
  std::vector<TP1> constants;  // value of each constant factor

  // Point with parameter s ∈ [0, ∞] (nullopt = ∞).
  std::vector<TP1> point(const std::optional<Rational>& s) const;
  bool contains(const std::vector<TP1>& z) const;
};

std::vector<ConicComponent> conic_fiber(int n, const std::vector<Rational>& t);

struct ConicStratum {
  std::string label;
  // per factor: "(1:0)", "(0:1)" or "D" (varies in the embedded block)
  std::vector<std::string> factors;
  int block_lo = -1, block_hi = -1;  // factors of the embedded D block
};

struct ConicStrataReport {
  std::vector<ConicStratum> strata;
  Report report;
};

// Codim-1 strata of 𝒟_{n+m+2} over t_{n+1} = 0, verified on sampled points;
// also checks the double-degeneration square for (n, m, ℓ) with ℓ ≤ 1.
ConicStrataReport conic_boundary_strata(int n, int m, std::uint64_t seed = 1);

// Random t in [0,∞)ⁿ with a random zero pattern.
std::vector<Rational> random_conic_base(int n, std::uint64_t seed);
// Sample `index` of a seeded run: n = index mod (max_n + 1), random t;
// checks the component count, membership of sampled points and the
// bijective / constant projections. True if all hold.
bool conic_sample_check(int max_n, long index, std::uint64_t seed);
// Serial reference for the sampling kernel; returns the number of failures.
long conic_sample_serial(int max_n, long count, std::uint64_t seed);

// ---- horn filling ----

// Block of an arc for the gluing: interior edges and free indices other
// than k give cube coordinates; edges of the first and last set do not.
Block horn_block(const Arc& a, int n, int k);

struct HornPiece {
  int arc = -1;  // horn object (index into the full category)
  Block block;
  std::uint32_t zero_edges = 0;  // kept interior edges (internal edge positions)
  LabelSet zero_free = 0;        // kept free indices
  bool hyper = false;
  int label = -1;                // stratum of the filler (index into the full category)
  std::vector<Rational> witness;
};

enum class FacetRole { Boundary, MissingFacet, InteriorGlue };

struct HornFacet {
  int arc = -1;
  LFacet facet;
  FacetRole role = FacetRole::Boundary;
  int partner = -1;  // glued arc or boundary label; -1 when the facet is empty
};

struct HornFillReport {
  Report report;
  ArcCategoryData full;
  std::vector<int> horn_objects;
  std::vector<HornPiece> pieces;
  std::vector<HornFacet> facets;
  std::vector<int> strata;  // realized labels, ascending
  CornerCategory glued;     // objects: strata, arrows: closure relation
  bool corner_ok = false;
  bool bijection_ok = false;
};

// Weighted colimit of L-blocks over Λⁿ_k, stratified by labels in the full
// arc category from C.source ∈ P_0 to C.target ∈ P_n. `nonempty(β)` says
// whether the payload over β is nonempty (default: all are); the filler is
// compared with the full objects on which `nonempty` holds. Blocks come from
// arcs of codim ≤ max_codim, so the comparison covers codim < max_codim.
HornFillReport horn_fill_strata(const ArcCategory& C, int k, int max_codim,
                                const std::function<bool(const Arc&)>& nonempty = {});

struct FilledComponent {
  std::string id;
  std::string source, target;
  Rational energy = 0;
  int vdim = 0;
  BigInt count = 0;  // vdim 0 only
  std::vector<std::pair<std::string, std::string>> pieces;  // (B01 id, B12 id)
};

struct HornFillTwo {
  std::vector<FilledComponent> missing;  // components of the missing facet, vdim ≤ 1
  IntMatrix chain_map;                   // rows: targets in set 2, columns: sources in set 0
  std::vector<std::string> notes;
};

// Λ²₁ horn filled from B01: X → Y and B12: Y → Z. Components of the missing
// facet are glued from hypersurface pieces of L_{1,0} × Y(p,q) × Y(q,r) and
// L_{2,0} × Y(p,q) × Y(q,q') × Y(q',r). Throws Error if some structure map
// adds obstruction rank (that case needs stabilization, not supported).
HornFillTwo horn_fill_two(const FlowBimodule& B01, const FlowBimodule& B12);

nlohmann::json lfacet_to_json(const LFacet& f);
nlohmann::json conic_component_to_json(const ConicComponent& c);
nlohmann::json horn_fill_to_json(const ArcCategory& C, const HornFillReport& r);
nlohmann::json horn_fill_two_to_json(const HornFillTwo& h);
std::string horn_fill_to_dot(const HornFillReport& r);

}  // namespace flowcat

#endif
