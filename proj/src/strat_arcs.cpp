#include "flowcat/strat_arcs.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace flowcat {

std::string gamma_name(const GammaSpec& g) {
  return g.kind == GammaKind::Trivial ? "trivial" : "nonneg-rational";
}

GammaSpec gamma_from_name(const std::string& s) {
  if (s == "trivial") return {GammaKind::Trivial};
  if (s == "nonneg-rational") return {GammaKind::NonnegRational};
  throw Error("unknown gamma kind '" + s + "'");
}

Rational Arc::total_energy() const {
  Rational t = 0;
  for (const auto& v : vertices) t += v.energy;
  return t;
}

namespace {

// rationals are kept in lowest terms; comparing parts avoids the division
// boost does for ==
bool same_rational(const Rational& x, const Rational& y) {
  return numerator(x) == numerator(y) && denominator(x) == denominator(y);
}

bool is_zero(const Rational& x) { return numerator(x).is_zero(); }

}  // namespace

bool arc_less(const Arc& a, const Arc& b) {
  if (a.edges != b.edges) return a.edges < b.edges;
  for (std::size_t i = 0; i < a.vertices.size() && i < b.vertices.size(); ++i) {
    if (a.vertices[i].label != b.vertices[i].label) return a.vertices[i].label < b.vertices[i].label;
    if (!same_rational(a.vertices[i].energy, b.vertices[i].energy)) return a.vertices[i].energy < b.vertices[i].energy;
  }
  return a.vertices.size() < b.vertices.size();
}

bool Sequence::unique_names() const {
  std::set<std::string> seen;
  for (const auto& s : sets)
    for (const auto& x : s)
      if (!seen.insert(x).second) return false;
  return true;
}

std::string Sequence::label(const Element& e) const {
  if (unique_names()) return name(e);
  return std::to_string(e.set) + ":" + name(e);
}

Element Sequence::element(int set, const std::string& nm) const {
  if (set < 0 || set >= static_cast<int>(sets.size())) throw Error("set index out of range");
  const auto& s = sets[set];
  auto it = std::find(s.begin(), s.end(), nm);
  if (it == s.end()) throw Error("no element '" + nm + "' in set " + std::to_string(set));
  return {set, static_cast<int>(it - s.begin())};
}

LabelSet range_mask(int lo, int hi) {
  LabelSet m = 0;
  for (int i = lo + 1; i < hi; ++i) m |= LabelSet{1} << i;
  return m;
}

namespace {

std::string format_label(LabelSet s) {
  std::string out;
  for (int i = 0; i < 32; ++i)
    if (s & (LabelSet{1} << i)) {
      if (!out.empty()) out += ",";
      out += std::to_string(i);
    }
  return out;
}

}  // namespace

std::string format_arc(const Sequence& seq, const Arc& a) {
  const bool unique = seq.unique_names();
  auto lab = [&](const Element& e) { return unique ? seq.name(e) : std::to_string(e.set) + ":" + seq.name(e); };
  std::string out = lab(a.edges.front());
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    out += "-[" + format_label(a.vertices[i].label);
    if (!is_zero(a.vertices[i].energy)) out += "@" + format_rational(a.vertices[i].energy);
    out += "]-" + lab(a.edges[i + 1]);
  }
  return out;
}

void validate_arc(const Sequence& seq, const GammaSpec& gamma, const Arc& a) {
  if (a.edges.size() < 2) throw Error("arc needs at least two edges");
  if (a.vertices.size() + 1 != a.edges.size()) throw Error("arc needs one vertex between consecutive edges");
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    const auto& e = a.edges[i];
    if (e.set < 0 || e.set >= static_cast<int>(seq.sets.size()) || e.index < 0 ||
        e.index >= static_cast<int>(seq.sets[e.set].size()))
      throw Error("arc edge references an unknown element");
    if (i > 0 && e.set < a.edges[i - 1].set) throw Error("arc edge set indices must be nondecreasing");
  }
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    int k = a.edges[i].set, k2 = a.edges[i + 1].set;
    if (a.vertices[i].label & ~range_mask(k, k2))
      throw Error("vertex label outside the indices between its edges");
    if (gamma.kind == GammaKind::Trivial && a.vertices[i].energy != 0)
      throw Error("nonzero energy with trivial gamma");
    if (k == k2 && a.vertices[i].energy < 0) throw Error("negative energy at a same-set vertex");
  }
}

LabelSet edge_sets(const Arc& a) {
  LabelSet m = 0;
  for (const auto& e : a.edges) m |= LabelSet{1} << e.set;
  return m;
}

LabelSet free_indices(const Arc& a) {
  LabelSet used = edge_sets(a);
  for (const auto& v : a.vertices) used |= v.label;
  return range_mask(a.edges.front().set, a.edges.back().set) & ~used;
}

int codim(const Arc& a) { return a.internal_edges() + std::popcount(free_indices(a)); }

Arc apply_arrow(const Arc& target, const ArcArrow& f) {
  const int e = target.internal_edges();
  if (e < 0) throw Error("apply_arrow: malformed arc");
  if (e < 32 && (f.collapsed >> e) != 0) throw Error("apply_arrow: collapsed edge out of range");
  if (f.added & ~free_indices(target)) throw Error("apply_arrow: added index is not free");
  // interior sets all of whose edges are internal and collapsed
  const LabelSet interior = range_mask(target.edges.front().set, target.edges.back().set);
  LabelSet forced = 0;
  for (int m = 0; m < 32; ++m) {
    if (!(interior & (LabelSet{1} << m))) continue;
    bool any = false, all = true;
    for (int i = 0; i < e; ++i)
      if (target.edges[i + 1].set == m) {
        any = true;
        if (!(f.collapsed & (1u << i))) all = false;
      }
    if (any && all) forced |= LabelSet{1} << m;
  }
  Arc out;
  out.edges.push_back(target.edges.front());
  ArcVertex cur = target.vertices[0];
  for (int i = 0; i < e; ++i) {
    if (f.collapsed & (1u << i)) {
      cur.label |= target.vertices[i + 1].label;
      if (!is_zero(target.vertices[i + 1].energy)) cur.energy += target.vertices[i + 1].energy;
    } else {
      out.vertices.push_back(cur);
      out.edges.push_back(target.edges[i + 1]);
      cur = target.vertices[i + 1];
    }
  }
  out.vertices.push_back(cur);
  out.edges.push_back(target.edges.back());
  for (std::size_t v = 0; v < out.vertices.size(); ++v) {
    LabelSet r = range_mask(out.edges[v].set, out.edges[v + 1].set);
    out.vertices[v].label |= (forced | f.added) & r;
  }
  return out;
}

ArcArrow compose_arrows(const Arc& gamma, const ArcArrow& g, const ArcArrow& f) {
  const int e = gamma.internal_edges();
  std::uint32_t lifted = 0;
  int c = 0;
  for (int i = 0; i < e; ++i) {
    if (g.collapsed & (1u << i)) continue;
    if (f.collapsed & (1u << c)) lifted |= 1u << i;
    ++c;
  }
  return {g.collapsed | lifted, g.added | f.added};
}

Arc collapse(const Sequence& seq, const Arc& a, std::uint32_t collapsed_edges,
             const std::vector<LabelSet>& new_labels) {
  validate_arc(seq, GammaSpec{GammaKind::NonnegRational}, a);
  Arc base = apply_arrow(a, {collapsed_edges, 0});
  if (new_labels.size() != base.vertices.size())
    throw Error("collapse: expected " + std::to_string(base.vertices.size()) + " vertex labels");
  // plain union of collapsed labels, without forced indices
  std::vector<LabelSet> merged;
  {
    LabelSet cur = a.vertices[0].label;
    for (int i = 0; i < a.internal_edges(); ++i) {
      if (collapsed_edges & (1u << i)) {
        cur |= a.vertices[i + 1].label;
      } else {
        merged.push_back(cur);
        cur = a.vertices[i + 1].label;
      }
    }
    merged.push_back(cur);
  }
  LabelSet added = 0;
  for (std::size_t v = 0; v < base.vertices.size(); ++v) {
    const LabelSet want = new_labels[v];
    if ((merged[v] & ~want) != 0)
      throw Error("collapse: label of merged vertex " + std::to_string(v) +
                  " does not contain the union of the collapsed labels");
    if ((base.vertices[v].label & ~want) != 0)
      throw Error("collapse: label of merged vertex " + std::to_string(v) +
                  " is missing a set whose edges were all collapsed into it");
    if (want & ~range_mask(base.edges[v].set, base.edges[v + 1].set))
      throw Error("collapse: label of merged vertex " + std::to_string(v) + " leaves its index range");
    added |= want & ~base.vertices[v].label;
  }
  return apply_arrow(a, {collapsed_edges, added});
}

Arc compose_arcs(const Arc& a, const Arc& b) {
  if (a.edges.empty() || b.edges.empty() || a.edges.back() != b.edges.front())
    throw Error("compose_arcs: endpoint mismatch");
  Arc out = a;
  out.edges.insert(out.edges.end(), b.edges.begin() + 1, b.edges.end());
  out.vertices.insert(out.vertices.end(), b.vertices.begin(), b.vertices.end());
  return out;
}

Arc minimal_arc(const Element& p, const Element& r, const Rational& energy) {
  Arc a;
  a.edges = {p, r};
  a.vertices = {{range_mask(p.set, r.set), energy}};
  return a;
}

namespace {

// All coarsenings of the supplied decompositions, grouped by length.
std::map<std::size_t, std::set<std::vector<Rational>>> allowed_energy_vectors(const ArcCategory& C,
                                                                               int max_len) {
  std::map<std::size_t, std::set<std::vector<Rational>>> out;
  if (C.gamma.kind == GammaKind::Trivial) {
    for (int len = 1; len <= max_len; ++len) out[len].insert(std::vector<Rational>(len, 0));
    return out;
  }
  if (C.decompositions.empty())
    throw Error("enumeration with nonneg-rational energies needs a finite list of energy decompositions");
  for (const auto& dec : C.decompositions) {
    if (dec.empty()) throw Error("empty energy decomposition");
    Rational sum = 0;
    for (const auto& x : dec) sum += x;
    if (sum != C.grade) throw Error("energy decomposition does not sum to the grade");
    const int L = static_cast<int>(dec.size());
    if (L > 20) throw Error("energy decomposition too long");
    for (std::uint32_t cuts = 0; cuts < (1u << (L - 1)); ++cuts) {
      std::vector<Rational> v;
      Rational cur = dec[0];
      for (int i = 1; i < L; ++i) {
        if (cuts & (1u << (i - 1))) {
          cur += dec[i];
        } else {
          v.push_back(cur);
          cur = dec[i];
        }
      }
      v.push_back(cur);
      if (static_cast<int>(v.size()) <= max_len) out[v.size()].insert(v);
    }
  }
  return out;
}

void sort_canonical(std::vector<Arc>& arcs) {
  std::stable_sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
    int ca = codim(a), cb = codim(b);
    if (ca != cb) return ca < cb;
    return arc_less(a, b);
  });
}

}  // namespace

std::vector<Arc> enumerate_objects(const ArcCategory& C, int max_codim) {
  if (max_codim < 0) throw Error("max_codim must be nonnegative");
  if (max_codim > 12) throw Error("enumeration bound too large");
  const Sequence& seq = C.sequence;
  const int j = C.source.set, l = C.target.set;
  if (j > l) throw Error("source set index exceeds target set index");
  validate_arc(seq, C.gamma, minimal_arc(C.source, C.target));
  auto energy_vectors = allowed_energy_vectors(C, max_codim + 1);

  std::vector<Element> pool;
  for (int s = j; s <= l; ++s)
    for (int x = 0; x < static_cast<int>(seq.sets[s].size()); ++x) pool.push_back({s, x});

  std::vector<Arc> out;
  std::vector<Element> inner;
  std::function<void()> labels_and_energies = [&]() {
    Arc a;
    a.edges.push_back(C.source);
    a.edges.insert(a.edges.end(), inner.begin(), inner.end());
    a.edges.push_back(C.target);
    const int d = static_cast<int>(a.edges.size()) - 1;
    a.vertices.assign(d, {});
    std::vector<LabelSet> ranges(d);
    for (int v = 0; v < d; ++v) ranges[v] = range_mask(a.edges[v].set, a.edges[v + 1].set);
    auto vit = energy_vectors.find(static_cast<std::size_t>(d));
    if (vit == energy_vectors.end()) return;
    std::function<void(int)> pick = [&](int v) {
      if (v == d) {
        if (codim(a) > max_codim) return;
        for (const auto& ev : vit->second) {
          bool ok = true;
          for (int u = 0; u < d && ok; ++u) {
            if (a.edges[u].set == a.edges[u + 1].set && ev[u] < 0) ok = false;
            a.vertices[u].energy = ev[u];
          }
          if (ok) out.push_back(a);
        }
        return;
      }
      // iterate subsets of the range
      LabelSet r = ranges[v];
      for (LabelSet s = r;; s = (s - 1) & r) {
        a.vertices[v].label = s;
        pick(v + 1);
        if (s == 0) break;
      }
    };
    pick(0);
  };
  std::function<void(int)> rec = [&](int min_set) {
    labels_and_energies();
    if (static_cast<int>(inner.size()) >= max_codim) return;
    for (const auto& e : pool) {
      if (e.set < min_set) continue;
      inner.push_back(e);
      rec(e.set);
      inner.pop_back();
    }
  };
  rec(j);

  for (const auto& a : out) validate_arc(seq, C.gamma, a);
  std::set<Arc, ArcLess> uniq(out.begin(), out.end());
  std::vector<Arc> arcs(uniq.begin(), uniq.end());
  sort_canonical(arcs);
  return arcs;
}

ArcCategoryData build_arc_category(const ArcCategory& C, int max_codim) {
  ArcCategoryData D;
  D.arcs = enumerate_objects(C, max_codim);
  for (std::size_t i = 0; i < D.arcs.size(); ++i) {
    D.index.emplace(D.arcs[i], static_cast<int>(i));
    D.category.add_object(format_arc(C.sequence, D.arcs[i]), codim(D.arcs[i]));
  }
  D.arrows.assign(D.category.arrow_count(), {});
  for (std::size_t i = 0; i < D.arcs.size(); ++i)
    D.arrows[D.category.identity(static_cast<int>(i))] = {static_cast<int>(i), ArcArrow{}};

  auto key = [](int t, const ArcArrow& f) {
    return (static_cast<std::uint64_t>(t) << 40) | (static_cast<std::uint64_t>(f.collapsed) << 20) | f.added;
  };
  std::unordered_map<std::uint64_t, int> lookup;
  for (std::size_t t = 0; t < D.arcs.size(); ++t) {
    const Arc& beta = D.arcs[t];
    const int e = beta.internal_edges();
    if (e >= 20) throw Error("too many internal edges");
    const LabelSet fr = free_indices(beta);
    lookup[key(static_cast<int>(t), {})] = D.category.identity(static_cast<int>(t));
    for (std::uint32_t S = 0; S < (1u << e); ++S) {
      for (LabelSet A = fr;; A = (A - 1) & fr) {
        if (S != 0 || A != 0) {
          ArcArrow f{S, A};
          Arc alpha = apply_arrow(beta, f);
          auto it = D.index.find(alpha);
          if (it == D.index.end())
            throw Error("enumeration not closed under collapse: missing " + format_arc(C.sequence, alpha));
          int a = D.category.add_arrow(
              "t" + std::to_string(t) + ":" + std::to_string(S) + ":" + std::to_string(A), it->second,
              static_cast<int>(t));
          D.arrows.push_back({static_cast<int>(t), f});
          lookup[key(static_cast<int>(t), f)] = a;
        }
        if (A == 0) break;
      }
    }
  }
  // composition: f into β, g: β → γ
  for (int g = 0; g < D.category.arrow_count(); ++g) {
    const auto& G = D.category.arrow(g);
    if (G.identity) continue;
    const auto& [gt, gdata] = D.arrows[g];
    const Arc& gamma = D.arcs[gt];
    for (int f : D.category.arrows_into(G.source)) {
      if (D.category.arrow(f).identity) continue;
      ArcArrow gf = compose_arrows(gamma, gdata, D.arrows[f].second);
      auto it = lookup.find(key(gt, gf));
      if (it == lookup.end()) throw Error("composite arrow missing");
      D.category.set_composite(f, g, it->second);
    }
  }
  return D;
}

std::vector<Codim1Object> enumerate_codim1(const ArcCategory& C) {
  const int j = C.source.set, l = C.target.set;
  const auto vectors = allowed_energy_vectors(C, 2);
  std::vector<Codim1Object> out;
  auto single = vectors.find(1);
  auto pairs = vectors.find(2);
  if (single != vectors.end()) {
    for (const auto& ev : single->second) {
      for (int k = j + 1; k < l; ++k) {
        Codim1Object o;
        o.arc = minimal_arc(C.source, C.target, ev[0]);
        o.arc.vertices[0].label &= ~(LabelSet{1} << k);
        o.kind = Codim1Kind::ForgetVertex;
        o.forgotten = k;
        o.q_plus = LabelSet{1} << k;
        o.left_energy = ev[0];
        if (j == l && ev[0] < 0) continue;
        out.push_back(o);
      }
    }
  }
  if (pairs != vectors.end()) {
    for (const auto& ev : pairs->second) {
      for (int m = j; m <= l; ++m) {
        for (int x = 0; x < static_cast<int>(C.sequence.sets[m].size()); ++x) {
          Element q{m, x};
          Codim1Object o;
          o.arc = compose_arcs(minimal_arc(C.source, q, ev[0]), minimal_arc(q, C.target, ev[1]));
          if ((j == m && ev[0] < 0) || (m == l && ev[1] < 0)) continue;
          o.kind = Codim1Kind::Break;
          o.broken = q;
          o.q_minus = {q};
          o.left_energy = ev[0];
          o.right_energy = ev[1];
          out.push_back(o);
        }
      }
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Codim1Object& a, const Codim1Object& b) { return arc_less(a.arc, b.arc); });
  return out;
}

Sequence face_sequence(const Sequence& seq, int i) {
  if (i < 0 || i > seq.n()) throw Error("face index out of range");
  Sequence out = seq;
  out.sets.erase(out.sets.begin() + i);
  return out;
}

bool avoids(const Arc& a, int i) {
  for (const auto& e : a.edges)
    if (e.set == i) return false;
  for (const auto& v : a.vertices)
    if (v.label & (LabelSet{1} << i)) return false;
  return true;
}

namespace {

LabelSet shift_up(LabelSet s, int i) {
  LabelSet low = s & ((LabelSet{1} << i) - 1);
  LabelSet high = s & ~((LabelSet{1} << i) - 1);
  return low | (high << 1);
}

LabelSet shift_down(LabelSet s, int i) {
  LabelSet low = s & ((LabelSet{1} << i) - 1);
  LabelSet high = s & ~((LabelSet{1} << (i + 1)) - 1);
  return low | (high >> 1);
}

}  // namespace

Arc include_face_arc(const Arc& a, int i) {
  Arc out = a;
  for (auto& e : out.edges)
    if (e.set >= i) ++e.set;
  for (auto& v : out.vertices) v.label = shift_up(v.label, i);
  return out;
}

Arc restrict_face_arc(const Arc& a, int i) {
  if (!avoids(a, i)) throw Error("restrict_face_arc: arc meets the removed set");
  Arc out = a;
  for (auto& e : out.edges)
    if (e.set > i) --e.set;
  for (auto& v : out.vertices) v.label = shift_down(v.label, i);
  return out;
}

namespace {

void add_arrows(SequenceArcs& S) {
  std::map<Arc, int, ArcLess> index;
  for (std::size_t i = 0; i < S.arcs.size(); ++i) index.emplace(S.arcs[i], static_cast<int>(i));
  for (std::size_t t = 0; t < S.arcs.size(); ++t) {
    const Arc& beta = S.arcs[t];
    const int e = beta.internal_edges();
    const LabelSet fr = free_indices(beta);
    for (std::uint32_t C = 0; C < (1u << e); ++C)
      for (LabelSet A = fr;; A = (A - 1) & fr) {
        ArcArrow f{C, A};
        auto it = index.find(apply_arrow(beta, f));
        if (it == index.end()) throw Error("sequence enumeration not closed under collapse");
        S.arrows.emplace_back(it->second, static_cast<int>(t), f);
        if (A == 0) break;
      }
  }
  std::sort(S.arrows.begin(), S.arrows.end());
}

using ArrowKey = std::tuple<Arc, Arc, ArcArrow>;

struct ArrowKeyLess {
  bool operator()(const ArrowKey& a, const ArrowKey& b) const {
    if (arc_less(std::get<0>(a), std::get<0>(b))) return true;
    if (arc_less(std::get<0>(b), std::get<0>(a))) return false;
    if (arc_less(std::get<1>(a), std::get<1>(b))) return true;
    if (arc_less(std::get<1>(b), std::get<1>(a))) return false;
    return std::get<2>(a) < std::get<2>(b);
  }
};

std::set<Arc, ArcLess> object_set(const SequenceArcs& S) { return {S.arcs.begin(), S.arcs.end()}; }

std::set<ArrowKey, ArrowKeyLess> arrow_set(const SequenceArcs& S) {
  std::set<ArrowKey, ArrowKeyLess> out;
  for (const auto& [s, t, f] : S.arrows) out.insert({S.arcs[s], S.arcs[t], f});
  return out;
}

}  // namespace

SequenceArcs enumerate_sequence(const Sequence& seq, int max_codim) {
  SequenceArcs S;
  S.sequence = seq;
  S.max_codim = max_codim;
  const int n = seq.n();
  for (int j = 0; j <= n; ++j)
    for (int l = j; l <= n; ++l)
      for (int p = 0; p < static_cast<int>(seq.sets[j].size()); ++p)
        for (int r = 0; r < static_cast<int>(seq.sets[l].size()); ++r) {
          ArcCategory C;
          C.sequence = seq;
          C.source = {j, p};
          C.target = {l, r};
          auto arcs = enumerate_objects(C, max_codim);
          S.arcs.insert(S.arcs.end(), arcs.begin(), arcs.end());
        }
  add_arrows(S);
  return S;
}

SequenceArcs face(const SequenceArcs& S, int i) {
  if (i < 0 || i > S.sequence.n()) throw Error("face index out of range");
  if (S.sequence.n() == 0) throw Error("face of a single-set sequence");
  SequenceArcs F;
  F.sequence = face_sequence(S.sequence, i);
  F.max_codim = S.max_codim - 1;
  std::map<int, int> renum;
  for (std::size_t a = 0; a < S.arcs.size(); ++a) {
    if (!avoids(S.arcs[a], i)) continue;
    Arc r = restrict_face_arc(S.arcs[a], i);
    if (codim(r) > F.max_codim) continue;
    renum[static_cast<int>(a)] = static_cast<int>(F.arcs.size());
    F.arcs.push_back(r);
  }
  for (const auto& [s, t, f] : S.arrows) {
    auto si = renum.find(s), ti = renum.find(t);
    if (si == renum.end() || ti == renum.end()) continue;
    F.arrows.emplace_back(si->second, ti->second, ArcArrow{f.collapsed, shift_down(f.added, i)});
  }
  std::sort(F.arrows.begin(), F.arrows.end());
  return F;
}

Report faces_check(const Sequence& seq, int max_codim) {
  Report R;
  const int n = seq.n();
  SequenceArcs S = enumerate_sequence(seq, max_codim);
  std::vector<SequenceArcs> first(n + 1);
  for (int i = 0; i <= n && n >= 1; ++i) {
    first[i] = face(S, i);
    SequenceArcs direct = enumerate_sequence(face_sequence(seq, i), max_codim - 1);
    if (object_set(first[i]) != object_set(direct))
      R.fail("face " + std::to_string(i) + ": objects differ from direct enumeration");
    if (arrow_set(first[i]) != arrow_set(direct))
      R.fail("face " + std::to_string(i) + ": arrows differ from direct enumeration");
  }
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n && n >= 2; ++j) {
      SequenceArcs a = face(first[j], i);
      SequenceArcs b = face(first[i], j - 1);
      if (object_set(a) != object_set(b))
        R.fail("objects: d" + std::to_string(i) + " d" + std::to_string(j) + " != d" + std::to_string(j - 1) +
               " d" + std::to_string(i));
      if (arrow_set(a) != arrow_set(b))
        R.fail("arrows: d" + std::to_string(i) + " d" + std::to_string(j) + " != d" + std::to_string(j - 1) +
               " d" + std::to_string(i));
    }
  R.note("objects " + std::to_string(S.arcs.size()) + ", arrows " + std::to_string(S.arrows.size()));
  return R;
}

bool horn_membership(const Arc& a, int n, int k) {
  if (n < 1 || k <= 0 || k >= n) throw Error("horn_membership: need 0 < k < n");
  if (a.edges.front().set != 0 || a.edges.back().set != n)
    throw Error("horn_membership: arc must run from the first to the last set");
  const LabelSet full = range_mask(0, n);
  const LabelSet missing = full & ~(LabelSet{1} << k);
  for (std::size_t v = 0; v < a.vertices.size(); ++v) {
    if (a.edges[v].set != 0 || a.edges[v + 1].set != n) continue;
    if (a.vertices[v].label == full || a.vertices[v].label == missing) return false;
  }
  return true;
}

Block block_functor(const Arc& a, int n, int k) {
  if (n < 1 || k <= 0 || k >= n) throw Error("block_functor: need 0 < k < n");
  if (a.edges.front().set != 0 || a.edges.back().set != n)
    throw Error("block_functor: arc must run from the first to the last set");
  const LabelSet fr = free_indices(a);
  Block b;
  b.eps = (fr >> k) & 1;
  b.d = std::popcount(fr & ~(LabelSet{1} << k)) + a.internal_edges();
  return b;
}

Block block_functor_checked(const Arc& a, int n, int k) {
  if (!horn_membership(a, n, k)) throw Error("block_functor: not a horn object");
  return block_functor(a, n, k);
}

nlohmann::json arc_to_json(const Sequence& seq, const Arc& a) {
  nlohmann::json j;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : a.edges) j["edges"].push_back({e.set, seq.name(e)});
  j["vertices"] = nlohmann::json::array();
  for (const auto& v : a.vertices) {
    nlohmann::json lab = nlohmann::json::array();
    for (int i = 0; i < 32; ++i)
      if (v.label & (LabelSet{1} << i)) lab.push_back(i);
    j["vertices"].push_back({{"label", lab}, {"energy", format_rational(v.energy)}});
  }
  return j;
}

Arc arc_from_json(const Sequence& seq, const nlohmann::json& j) {
  Arc a;
  try {
    for (const auto& e : j.at("edges")) a.edges.push_back(seq.element(e.at(0).get<int>(), e.at(1).get<std::string>()));
    for (const auto& v : j.at("vertices")) {
      ArcVertex x;
      for (const auto& i : v.at("label")) {
        int m = i.get<int>();
        if (m < 0 || m > 30) throw Error("label index out of range");
        x.label |= LabelSet{1} << m;
      }
      if (v.contains("energy")) x.energy = parse_rational(v.at("energy").get<std::string>());
      a.vertices.push_back(x);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed arc: ") + e.what());
  }
  validate_arc(seq, GammaSpec{GammaKind::NonnegRational}, a);
  return a;
}

nlohmann::json sequence_to_json(const Sequence& seq) { return seq.sets; }

Sequence sequence_from_json(const nlohmann::json& j) {
  Sequence s;
  try {
    s.sets = j.get<std::vector<std::vector<std::string>>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed sequence: ") + e.what());
  }
  if (s.sets.empty()) throw Error("sequence needs at least one set");
  if (s.sets.size() > 30) throw Error("sequence too long");
  for (const auto& set : s.sets) {
    std::set<std::string> u(set.begin(), set.end());
    if (u.size() != set.size()) throw Error("duplicate element within a set");
  }
  return s;
}

nlohmann::json arc_category_to_json(const ArcCategory& C) {
  nlohmann::json j;
  j["sequence"] = sequence_to_json(C.sequence);
  j["gamma"] = gamma_name(C.gamma);
  j["source"] = {C.source.set, C.sequence.name(C.source)};
  j["target"] = {C.target.set, C.sequence.name(C.target)};
  j["grade"] = format_rational(C.grade);
  j["decompositions"] = nlohmann::json::array();
  for (const auto& d : C.decompositions) {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : d) v.push_back(format_rational(x));
    j["decompositions"].push_back(v);
  }
  return j;
}

ArcCategory arc_category_from_json(const nlohmann::json& j) {
  ArcCategory C;
  try {
    C.sequence = sequence_from_json(j.at("sequence"));
    C.gamma = gamma_from_name(j.value("gamma", std::string("trivial")));
    C.source = C.sequence.element(j.at("source").at(0).get<int>(), j.at("source").at(1).get<std::string>());
    C.target = C.sequence.element(j.at("target").at(0).get<int>(), j.at("target").at(1).get<std::string>());
    C.grade = parse_rational(j.value("grade", std::string("0")));
    if (j.contains("decompositions"))
      for (const auto& d : j.at("decompositions")) {
        std::vector<Rational> v;
        for (const auto& x : d) v.push_back(parse_rational(x.get<std::string>()));
        C.decompositions.push_back(v);
      }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed arc category: ") + e.what());
  }
  if (C.gamma.kind == GammaKind::Trivial && C.grade != 0) throw Error("trivial gamma needs grade 0");
  return C;
}

std::string arc_category_to_dot(const ArcCategory& C, const ArcCategoryData& data) {
  (void)C;
  return corner_to_dot(data.category);
}

}  // namespace flowcat
