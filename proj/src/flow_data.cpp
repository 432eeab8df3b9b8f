#include "flowcat/flow_data.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace flowcat {

std::vector<int> face_vertices(Face f) {
  std::vector<int> v;
  for (int i = 0; i < 32; ++i)
    if (f & (Face{1} << i)) v.push_back(i);
  return v;
}

Face face_from_vertices(const std::vector<int>& v) {
  Face f = 0;
  for (int i : v) {
    if (i < 0 || i > 30) throw Error("face vertex out of range");
    f |= Face{1} << i;
  }
  return f;
}

std::string format_face(Face f) {
  std::string s = "{";
  bool first = true;
  for (int v : face_vertices(f)) {
    s += (first ? "" : ",") + std::to_string(v);
    first = false;
  }
  return s + "}";
}

std::optional<int> FlowSimplex::object_index(int set, const std::string& id) const {
  if (set < 0 || set >= static_cast<int>(sets.size())) return std::nullopt;
  const auto& s = sets[set];
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i].id == id) return static_cast<int>(i);
  return std::nullopt;
}

const FlowObject& FlowSimplex::object(int set, const std::string& id) const {
  auto i = object_index(set, id);
  if (!i) throw Error("no object '" + id + "' in set " + std::to_string(set));
  return sets[set][*i];
}

const std::vector<Component>& FlowSimplex::cell(Face f) const {
  static const std::vector<Component> empty;
  auto it = cells.find(f);
  return it == cells.end() ? empty : it->second;
}

const Component* FlowSimplex::find(Face f, const std::string& id) const {
  for (const auto& c : cell(f))
    if (c.id == id) return &c;
  return nullptr;
}

std::size_t FlowSimplex::component_count() const {
  std::size_t k = 0;
  for (const auto& [f, cs] : cells) k += cs.size();
  return k;
}

FlowCategory make_category(std::vector<FlowObject> objects, GammaSpec gamma) {
  FlowCategory F;
  F.gamma = gamma;
  F.sets.push_back(std::move(objects));
  return F;
}

void canonicalize(FlowSimplex& S) {
  for (auto it = S.cells.begin(); it != S.cells.end();) {
    if (it->second.empty()) {
      it = S.cells.erase(it);
      continue;
    }
    auto& cs = it->second;
    for (auto& c : cs) {
      for (auto& f : c.facets)
        std::sort(f.entries.begin(), f.entries.end(),
                  [](const FacetEntry& a, const FacetEntry& b) {
                    return std::tie(a.parts, a.sign, a.added_rank) < std::tie(b.parts, b.sign, b.added_rank);
                  });
      std::sort(c.facets.begin(), c.facets.end(), [](const Facet& a, const Facet& b) {
        return std::make_tuple(static_cast<int>(a.kind), a.vertex, a.object) <
               std::make_tuple(static_cast<int>(b.kind), b.vertex, b.object);
      });
    }
    std::sort(cs.begin(), cs.end(), [](const Component& a, const Component& b) { return a.id < b.id; });
    ++it;
  }
}

int break_sign(int k, int m) { return ((k * (m - k + 1)) % 2 == 0) ? 1 : -1; }
int forget_sign(int i, int m) { return ((m - i) % 2 == 0) ? 1 : -1; }

namespace {

int position(Face f, int v) { return std::popcount(f & ((Face{1} << v) - 1)); }
int top_position(Face f) { return std::popcount(f) - 1; }
int min_vertex(Face f) { return std::countr_zero(f); }
int max_vertex(Face f) { return 31 - std::countl_zero(f); }
Face upto(Face f, int k) { return f & ((Face{2} << k) - 1); }
Face from(Face f, int k) { return f & ~((Face{1} << k) - 1); }

using CellIndex = std::map<Face, std::unordered_map<std::string, const Component*>>;

CellIndex index_cells(const FlowSimplex& S) {
  CellIndex idx;
  for (const auto& [f, cs] : S.cells)
    for (const auto& c : cs) idx[f].emplace(c.id, &c);
  return idx;
}

const Component* lookup(const CellIndex& idx, Face f, const std::string& id) {
  auto it = idx.find(f);
  if (it == idx.end()) return nullptr;
  auto jt = it->second.find(id);
  return jt == it->second.end() ? nullptr : jt->second;
}

// Cells holding the parts of an entry of a facet of a component in cell f.
std::vector<Face> part_cells(Face f, const Facet& facet) {
  if (facet.kind == FacetKind::Break) return {upto(f, facet.vertex), from(f, facet.vertex)};
  return {f & ~(Face{1} << facet.vertex)};
}

std::string where(Face f, const Component& c) { return "cell " + format_face(f) + " component '" + c.id + "'"; }

std::string pair_name(const std::string& p, const std::string& r) { return "(" + p + ", " + r + ")"; }

struct FacetBuilder {
  std::map<std::tuple<int, int, std::string>, Facet> facets;
  void add(FacetKind kind, int vertex, const std::string& object, FacetEntry e) {
    auto& f = facets[{static_cast<int>(kind), vertex, object}];
    f.kind = kind;
    f.vertex = vertex;
    f.object = object;
    f.entries.push_back(std::move(e));
  }
  std::vector<Facet> take() {
    std::vector<Facet> out;
    for (auto& [k, f] : facets) out.push_back(std::move(f));
    return out;
  }
};


}  // namespace

Report validate_simplex(const FlowSimplex& S, Ring ring) {
  Report R;
  const int n = S.n();
  if (n < 0) {
    R.fail("simplex has no vertex sets");
    return R;
  }
  if (n > 20) R.fail("simplex dimension too large");
  if (S.truncation < 1) R.fail("truncation must be at least 1");
  for (int k = 0; k <= n; ++k) {
    std::set<std::string> ids;
    for (const auto& o : S.sets[k]) {
      if (o.id.empty()) R.fail("empty object id in set " + std::to_string(k));
      if (!ids.insert(o.id).second) R.fail("duplicate object '" + o.id + "' in set " + std::to_string(k));
      if (o.v.plus < 0 || o.v.minus < 0) R.fail("negative virtual dimension summand at object '" + o.id + "'");
    }
  }
  if (!R.ok) return R;
  const CellIndex idx = index_cells(S);
  const Face full = (Face{2} << n) - 1;
  bool structural_ok = true;

  for (const auto& [f, cs] : S.cells) {
    if (f == 0 || (f & ~full)) {
      R.fail("cell " + format_face(f) + " is not a face of the simplex");
      structural_ok = false;
      continue;
    }
    const int j = min_vertex(f), l = max_vertex(f), m = top_position(f);
    std::set<std::string> ids;
    for (const auto& c : cs) {
      const std::string w = where(f, c);
      if (!ids.insert(c.id).second) {
        R.fail(w + ": duplicate id");
        structural_ok = false;
      }
      auto pi = S.object_index(j, c.source);
      auto ri = S.object_index(l, c.target);
      if (!pi || !ri) {
        R.fail(w + ": unknown endpoint " + pair_name(c.source, c.target));
        structural_ok = false;
        continue;
      }
      if (S.gamma.kind == GammaKind::Trivial && c.energy != 0) R.fail(w + ": nonzero energy with trivial gamma");
      if (j == l && c.energy < 0) R.fail(w + ": negative energy within one set");
      if (c.total_dim < 0 || c.obstruction_rank < 0) R.fail(w + ": negative dimension or rank");
      const int expect = S.sets[j][*pi].dim - S.sets[l][*ri].dim - 1 + m;
      if (c.vdim() != expect)
        R.fail(w + ": framing equation fails, virtual dimension " + std::to_string(c.vdim()) + " but dim(" +
               c.source + ") - dim(" + c.target + ") - 1 + " + std::to_string(m) + " = " + std::to_string(expect));
      if (j == l && c.source == c.target && c.energy == 0)
        R.fail(w + ": component in " + pair_name(c.source, c.target) + " at energy 0");
      if (c.vdim() <= S.truncation && !c.facets_available)
        R.fail(w + ": facet data required up to virtual dimension " + std::to_string(S.truncation));
      if (!c.facets_available && !c.facets.empty()) R.fail(w + ": facets listed but flagged unavailable");
      std::set<std::tuple<int, int, std::string>> labels;
      for (const auto& fc : c.facets) {
        if (!labels.insert({static_cast<int>(fc.kind), fc.vertex, fc.object}).second)
          R.fail(w + ": repeated facet label");
        if (fc.vertex < 0 || fc.vertex > 30 || !(f & (Face{1} << fc.vertex))) {
          R.fail(w + ": facet vertex " + std::to_string(fc.vertex) + " not in the cell");
          structural_ok = false;
          continue;
        }
        if (fc.kind == FacetKind::Break) {
          if (!S.object_index(fc.vertex, fc.object)) {
            R.fail(w + ": break at unknown object '" + fc.object + "'");
            structural_ok = false;
            continue;
          }
        } else if (fc.vertex == j || fc.vertex == l) {
          R.fail(w + ": forgotten vertex must be interior to the cell");
          structural_ok = false;
          continue;
        }
        if (fc.entries.empty()) R.fail(w + ": facet with no entries");
        const auto pcs = part_cells(f, fc);
        for (const auto& e : fc.entries) {
          if (e.parts.size() != pcs.size()) {
            R.fail(w + ": facet entry has " + std::to_string(e.parts.size()) + " parts, expected " +
                   std::to_string(pcs.size()));
            structural_ok = false;
            continue;
          }
          if (e.sign != 1 && e.sign != -1) R.fail(w + ": facet sign must be +1 or -1");
          if (e.added_rank < 0) R.fail(w + ": negative added rank");
          std::vector<const Component*> ps;
          for (std::size_t t = 0; t < pcs.size(); ++t) {
            const Component* p = lookup(idx, pcs[t], e.parts[t]);
            if (!p) {
              R.fail(w + ": facet part '" + e.parts[t] + "' not found in cell " + format_face(pcs[t]));
              structural_ok = false;
            }
            ps.push_back(p);
          }
          if (std::find(ps.begin(), ps.end(), nullptr) != ps.end()) continue;
          Rational energy = 0;
          int td = 0, obs = 0;
          for (const auto* p : ps) {
            energy += p->energy;
            td += p->total_dim;
            obs += p->obstruction_rank;
          }
          if (fc.kind == FacetKind::Break) {
            if (ps[0]->source != c.source || ps[0]->target != fc.object || ps[1]->source != fc.object ||
                ps[1]->target != c.target)
              R.fail(w + ": break entry endpoints do not match");
          } else if (ps[0]->source != c.source || ps[0]->target != c.target) {
            R.fail(w + ": forget entry endpoints do not match");
          }
          if (energy != c.energy) R.fail(w + ": facet energies do not add up");
          if (td + e.added_rank != c.total_dim - 1) R.fail(w + ": facet dimension bookkeeping fails");
          if (obs + e.added_rank != c.obstruction_rank) R.fail(w + ": facet obstruction rank bookkeeping fails");
        }
      }
    }
  }
  if (!structural_ok) return R;

  // energy-0 order within each set
  for (int k = 0; k <= n; ++k) {
    const auto& objs = S.sets[k];
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& c : S.cell(Face{1} << k))
      if (c.energy == 0) adj[c.source].push_back(c.target);
    std::map<std::string, int> state;
    std::vector<std::string> cycle;
    std::function<bool(const std::string&)> dfs = [&](const std::string& v) {
      state[v] = 1;
      for (const auto& w : adj[v]) {
        if (state[w] == 1) {
          cycle = {v, w};
          return true;
        }
        if (state[w] == 0 && dfs(w)) return true;
      }
      state[v] = 2;
      return false;
    };
    for (const auto& o : objs)
      if (state[o.id] == 0 && dfs(o.id)) {
        R.fail("set " + std::to_string(k) + ": energy-0 morphisms contain a cycle through " +
               pair_name(cycle[0], cycle[1]));
        break;
      }
  }

  // identifications: each composable pair / forgotten-vertex component once
  using EntryKey = std::tuple<Face, int, int, std::string, std::vector<std::string>>;
  std::map<EntryKey, int> seen;
  for (const auto& [f, cs] : S.cells)
    for (const auto& c : cs)
      for (const auto& fc : c.facets)
        for (const auto& e : fc.entries) {
          int& k = seen[{f, static_cast<int>(fc.kind), fc.vertex, fc.object, e.parts}];
          if (++k == 2)
            R.fail("cell " + format_face(f) + ": boundary piece (" + e.parts[0] +
                   (e.parts.size() > 1 ? ", " + e.parts[1] : std::string()) + ") identified more than once");
        }
  for (Face f = 1; f <= full; ++f) {
    if ((f & full) != f) continue;
    const int j = min_vertex(f), l = max_vertex(f);
    for (int k : face_vertices(f)) {
      const Face L = upto(f, k), Rt = from(f, k);
      std::unordered_map<std::string, std::vector<const Component*>> by_source;
      for (const auto& b : S.cell(Rt)) by_source[b.source].push_back(&b);
      for (const auto& a : S.cell(L)) {
        auto it = by_source.find(a.target);
        if (it == by_source.end()) continue;
        for (const Component* b : it->second) {
          if (a.vdim() + b->vdim() + 1 > S.truncation) continue;
          if (!seen.count({f, static_cast<int>(FacetKind::Break), k, a.target, {a.id, b->id}}))
            R.fail("cell " + format_face(f) + ": composable pair (" + a.id + ", " + b->id + ") through '" +
                   a.target + "' in " + pair_name(a.source, b->target) + " is not a boundary piece");
        }
      }
      if (k != j && k != l) {
        for (const auto& c : S.cell(f & ~(Face{1} << k))) {
          if (c.vdim() + 1 > S.truncation) continue;
          if (!seen.count({f, static_cast<int>(FacetKind::Forget), k, std::string(), {c.id}}))
            R.fail("cell " + format_face(f) + ": component '" + c.id + "' of the face without vertex " +
                   std::to_string(k) + " is not a boundary piece");
        }
      }
    }
  }

  // codim-2 corners are reached exactly twice
  for (const auto& [f, cs] : S.cells)
    for (const auto& c : cs) {
      if (!c.facets_available || c.vdim() > S.truncation || c.vdim() < 2) continue;
      using Label = std::tuple<int, int, std::string>;
      using Corner = std::pair<std::multiset<Label>, std::vector<std::pair<Face, std::string>>>;
      std::map<Corner, int> corners;
      bool complete = true;
      for (const auto& fc : c.facets) {
        const auto pcs = part_cells(f, fc);
        for (const auto& e : fc.entries)
          for (std::size_t t = 0; t < e.parts.size(); ++t) {
            const Component* x = lookup(idx, pcs[t], e.parts[t]);
            if (!x->facets_available) {
              complete = false;
              continue;
            }
            for (const auto& gx : x->facets) {
              const auto xcs = part_cells(pcs[t], gx);
              for (const auto& ex : gx.entries) {
                Corner k;
                k.first = {Label{static_cast<int>(fc.kind), fc.vertex, fc.object},
                           Label{static_cast<int>(gx.kind), gx.vertex, gx.object}};
                for (std::size_t u = 0; u < e.parts.size(); ++u) {
                  if (u != t) {
                    k.second.emplace_back(pcs[u], e.parts[u]);
                    continue;
                  }
                  for (std::size_t v = 0; v < ex.parts.size(); ++v) k.second.emplace_back(xcs[v], ex.parts[v]);
                }
                ++corners[k];
              }
            }
          }
      }
      if (!complete) continue;
      for (const auto& [k, cnt] : corners)
        if (cnt != 2) {
          std::string parts;
          for (const auto& [pf, pid] : k.second) parts += (parts.empty() ? "" : ", ") + pid;
          R.fail(where(f, c) + ": codim-2 corner (" + parts + ") reached " + std::to_string(cnt) +
                 " times, expected 2");
        }
    }

  // signed boundary count of each 1-dimensional component
  const bool use_signs = ring == Ring::Z && S.signs;
  if (ring == Ring::Z && !S.signs) R.note("signs unavailable; boundary counts checked mod 2");
  for (const auto& [f, cs] : S.cells)
    for (const auto& c : cs) {
      if (c.vdim() != 1 || !c.facets_available) continue;
      BigInt total = 0;
      for (const auto& fc : c.facets) {
        const auto pcs = part_cells(f, fc);
        for (const auto& e : fc.entries) {
          BigInt prod = e.sign;
          for (std::size_t t = 0; t < e.parts.size(); ++t) {
            const Component* x = lookup(idx, pcs[t], e.parts[t]);
            prod *= (x->vdim() == 0) ? x->count : BigInt(0);
          }
          total += prod;
        }
      }
      if (use_signs ? total != 0 : total % 2 != 0)
        R.fail(where(f, c) + ": boundary count " + total.str() + (use_signs ? " is not zero" : " is odd"));
    }

  // matrix identity, energy by energy
  for (Face f = 1; f <= full; ++f) {
    if ((f & full) != f) continue;
    const int j = min_vertex(f), l = max_vertex(f), m = top_position(f);
    std::map<std::tuple<std::string, std::string, Rational>, BigInt> sum;
    for (int k : face_vertices(f)) {
      const int sgn = break_sign(position(f, k), m);
      std::unordered_map<std::string, std::vector<const Component*>> by_source;
      for (const auto& b : S.cell(from(f, k)))
        if (b.vdim() == 0) by_source[b.source].push_back(&b);
      for (const auto& a : S.cell(upto(f, k))) {
        if (a.vdim() != 0) continue;
        auto it = by_source.find(a.target);
        if (it == by_source.end()) continue;
        for (const Component* b : it->second) sum[{a.source, b->target, a.energy + b->energy}] += sgn * a.count * b->count;
      }
      if (k != j && k != l) {
        const int fs = forget_sign(position(f, k), m);
        for (const auto& c : S.cell(f & ~(Face{1} << k)))
          if (c.vdim() == 0) sum[{c.source, c.target, c.energy}] += fs * c.count;
      }
    }
    for (const auto& [key, v] : sum) {
      if (use_signs ? v == 0 : v % 2 == 0) continue;
      const auto& [p, r, e] = key;
      std::string what = (m == 0) ? "d^2 != 0" : (m == 1) ? "chain map identity fails" : "homotopy identity fails";
      R.fail(what + " at " + pair_name(p, r) + " in cell " + format_face(f) +
             (e != 0 ? " energy " + format_rational(e) : std::string()) + ": residual " + v.str());
    }
  }
  return R;
}

Report validate_flow_category(const FlowCategory& F, Ring ring) {
  if (F.n() != 0) {
    Report R;
    R.fail("expected a flow category (one object set), got " + std::to_string(F.n() + 1) + " sets");
    return R;
  }
  return validate_simplex(F, ring);
}

Report validate_bimodule(const FlowBimodule& B, Ring ring) {
  if (B.n() != 1) {
    Report R;
    R.fail("expected a bimodule (two object sets), got " + std::to_string(B.n() + 1) + " sets");
    return R;
  }
  return validate_simplex(B, ring);
}

IntMatrix count_matrix(const FlowSimplex& S, Face f) {
  const int j = min_vertex(f), l = max_vertex(f);
  IntMatrix M(static_cast<int>(S.sets.at(l).size()), static_cast<int>(S.sets.at(j).size()));
  for (const auto& c : S.cell(f)) {
    if (c.vdim() != 0) continue;
    auto p = S.object_index(j, c.source);
    auto r = S.object_index(l, c.target);
    if (!p || !r) throw Error("count_matrix: unknown endpoint in cell " + format_face(f));
    M(*r, *p) += c.count;
  }
  return M;
}

void fill_intervals(FlowSimplex& S, Face f, const std::string& id_prefix) {
  struct Piece {
    FacetKind kind;
    int vertex;
    std::string object;
    std::vector<std::string> parts;
    int sign;
    int value;
    int td, obs;
  };
  const int j = min_vertex(f), l = max_vertex(f), m = top_position(f);
  std::map<std::tuple<std::string, std::string, Rational>, std::vector<Piece>> pieces;
  auto unit = [](const Component& c) {
    if (c.count > 1 || c.count < -1) throw Error("fill_intervals: component '" + c.id + "' has count beyond +-1");
    return static_cast<int>(c.count);
  };
  for (int k : face_vertices(f)) {
    const int sgn = break_sign(position(f, k), m);
    for (const auto& a : S.cell(upto(f, k))) {
      if (a.vdim() != 0) continue;
      for (const auto& b : S.cell(from(f, k))) {
        if (b.vdim() != 0 || b.source != a.target) continue;
        pieces[{a.source, b.target, a.energy + b.energy}].push_back(
            {FacetKind::Break, k, a.target, {a.id, b.id}, sgn, sgn * unit(a) * unit(b), a.total_dim + b.total_dim,
             a.obstruction_rank + b.obstruction_rank});
      }
    }
    if (k == j || k == l) continue;
    const int fs = forget_sign(position(f, k), m);
    for (const auto& c : S.cell(f & ~(Face{1} << k)))
      if (c.vdim() == 0)
        pieces[{c.source, c.target, c.energy}].push_back(
            {FacetKind::Forget, k, "", {c.id}, fs, fs * unit(c), c.total_dim, c.obstruction_rank});
  }
  auto& out = S.cells[f];
  for (auto& [key, ps] : pieces) {
    const auto& [p, r, e] = key;
    std::vector<const Piece*> plus, minus, zero;
    for (const auto& x : ps) (x.value > 0 ? plus : x.value < 0 ? minus : zero).push_back(&x);
    if (plus.size() != minus.size())
      throw CheckFailure("boundary pieces over (" + p + ", " + r + ") in cell " + format_face(f) + " do not cancel",
                         {"plus=" + std::to_string(plus.size()), "minus=" + std::to_string(minus.size())});
    std::vector<std::vector<const Piece*>> groups;
    for (std::size_t i = 0; i < plus.size(); ++i) groups.push_back({plus[i], minus[i]});
    for (const auto* z : zero) groups.push_back({z});
    int counter = 0;
    for (const auto& g : groups) {
      Component c;
      c.id = id_prefix + "(" + p + "," + r + ")#" + std::to_string(counter++);
      c.source = p;
      c.target = r;
      c.energy = e;
      for (const auto* x : g) c.obstruction_rank = std::max(c.obstruction_rank, x->obs);
      c.total_dim = c.obstruction_rank + 1;
      FacetBuilder fb;
      for (const auto* x : g) fb.add(x->kind, x->vertex, x->object, {x->parts, x->sign, c.obstruction_rank - x->obs});
      c.facets = fb.take();
      out.push_back(std::move(c));
    }
  }
  canonicalize(S);
}

namespace {

// Copy of S restricted to faces inside `keep`, with vertex v renamed to map[v].
FlowSimplex relabel(const FlowSimplex& S, const std::vector<int>& map, int new_n) {
  FlowSimplex T;
  T.gamma = S.gamma;
  T.truncation = S.truncation;
  T.signs = S.signs;
  T.sets.assign(new_n + 1, {});
  for (int v = 0; v <= S.n(); ++v)
    if (map[v] >= 0) T.sets[map[v]] = S.sets[v];
  for (const auto& [f, cs] : S.cells) {
    Face g = 0;
    bool ok = true;
    for (int v : face_vertices(f)) {
      if (map[v] < 0) ok = false;
      else g |= Face{1} << map[v];
    }
    if (!ok) continue;
    auto& out = T.cells[g];
    for (auto c : cs) {
      for (auto& fc : c.facets) fc.vertex = map[fc.vertex];
      out.push_back(std::move(c));
    }
  }
  canonicalize(T);
  return T;
}

}  // namespace

FlowSimplex face(const FlowSimplex& S, int i) {
  if (i < 0 || i > S.n()) throw Error("face index " + std::to_string(i) + " out of range");
  if (S.n() == 0) throw Error("face of a flow category");
  std::vector<int> map(S.n() + 1);
  for (int v = 0; v <= S.n(); ++v) map[v] = v < i ? v : v == i ? -1 : v - 1;
  return relabel(S, map, S.n() - 1);
}

FlowCategory endpoint(const FlowSimplex& S, int vertex) {
  if (vertex < 0 || vertex > S.n()) throw Error("vertex out of range");
  std::vector<int> map(S.n() + 1, -1);
  map[vertex] = 0;
  return relabel(S, map, 0);
}

namespace {

std::string unit_id(const std::string& p) { return "u(" + p + ")"; }
std::string d_id(const std::string& c) { return "D(" + c + ")"; }


// Degeneracy duplicating vertex `dup` (0 or n). Vertex dup and dup+1 of the
// result are the two copies.
FlowSimplex degenerate(const FlowSimplex& S, bool first) {
  const int n = S.n();
  const int lo = first ? 0 : n;  // copies lo and lo + 1 in T
  auto mu = [&](int t) { return t <= lo ? t : t - 1; };
  FlowSimplex T;
  T.gamma = S.gamma;
  T.signs = S.signs;
  T.truncation = S.truncation;
  T.sets.assign(n + 2, {});
  for (int t = 0; t <= n + 1; ++t) T.sets[t] = S.sets[mu(t)];
  const Face both = (Face{1} << lo) | (Face{2} << lo);
  const Face fullT = (Face{4} << n) - 1;

  for (Face g = 1; g <= fullT; ++g) {
    if ((g & both) != both) {
      // copy of S cell μ(g)
      Face f = 0;
      for (int t : face_vertices(g)) f |= Face{1} << mu(t);
      const auto& cs = S.cell(f);
      if (cs.empty()) continue;
      auto& out = T.cells[g];
      for (auto c : cs) {
        for (auto& fc : c.facets) {
          if (fc.vertex == lo) fc.vertex = (g & (Face{1} << lo)) ? lo : lo + 1;
          else if (fc.vertex > lo) fc.vertex += 1;
        }
        out.push_back(std::move(c));
      }
      continue;
    }
    Face f = 0;
    for (int t : face_vertices(g)) f |= Face{1} << mu(t);
    const int mT = top_position(g), mS = top_position(f);
    auto& out = T.cells[g];
    if (g == both)
      for (const auto& o : S.sets[lo]) {
        Component u;
        u.id = unit_id(o.id);
        u.source = u.target = o.id;
        u.count = 1;
        out.push_back(u);
      }
    for (const auto& c : S.cell(f)) {
      Component D;
      D.id = d_id(c.id);
      D.source = c.source;
      D.target = c.target;
      D.energy = c.energy;
      D.total_dim = c.total_dim + 1;
      D.obstruction_rank = c.obstruction_rank;
      D.count = 0;
      D.facets_available = c.facets_available;
      if (!c.facets_available) {
        out.push_back(std::move(D));
        continue;
      }
      FacetBuilder fb;
      // ends of the interval
      if (g == both) {
        fb.add(FacetKind::Break, lo, c.target, {{c.id, unit_id(c.target)}, break_sign(0, 1), 0});
        fb.add(FacetKind::Break, lo + 1, c.source, {{unit_id(c.source), c.id}, break_sign(1, 1), 0});
      } else if (first) {
        fb.add(FacetKind::Forget, 1, "", {{c.id}, forget_sign(1, mT), 0});
        fb.add(FacetKind::Break, 1, c.source, {{unit_id(c.source), c.id}, break_sign(1, mT), 0});
      } else {
        fb.add(FacetKind::Forget, lo, "", {{c.id}, forget_sign(mT - 1, mT), 0});
        fb.add(FacetKind::Break, lo, c.target, {{c.id, unit_id(c.target)}, break_sign(mT - 1, mT), 0});
      }
      // thickened facets of c
      for (const auto& fc : c.facets) {
        const int ps = (fc.kind == FacetKind::Break) ? break_sign(position(f, fc.vertex), mS)
                                                      : forget_sign(position(f, fc.vertex), mS);
        for (const auto& e : fc.entries) {
          if (fc.kind == FacetKind::Forget) {
            const int tv = fc.vertex > lo ? fc.vertex + 1 : fc.vertex;
            fb.add(FacetKind::Forget, tv, "",
                   {{d_id(e.parts[0])}, e.sign * ps * forget_sign(position(g, tv), mT), e.added_rank});
            continue;
          }
          if (fc.vertex == lo) {
            // both copies of the duplicated set
            fb.add(FacetKind::Break, lo, fc.object,
                   {{e.parts[0], d_id(e.parts[1])}, e.sign * ps * break_sign(position(g, lo), mT), e.added_rank});
            fb.add(FacetKind::Break, lo + 1, fc.object,
                   {{d_id(e.parts[0]), e.parts[1]}, e.sign * ps * break_sign(position(g, lo + 1), mT),
                    e.added_rank});
          } else if (fc.vertex > lo) {
            const int tv = fc.vertex + 1;
            fb.add(FacetKind::Break, tv, fc.object,
                   {{d_id(e.parts[0]), e.parts[1]}, e.sign * ps * break_sign(position(g, tv), mT), e.added_rank});
          } else {
            const int tv = fc.vertex;
            fb.add(FacetKind::Break, tv, fc.object,
                   {{e.parts[0], d_id(e.parts[1])}, e.sign * ps * break_sign(position(g, tv), mT), e.added_rank});
          }
        }
      }
      D.facets = fb.take();
      out.push_back(std::move(D));
    }
  }
  canonicalize(T);
  return T;
}

}  // namespace

FlowSimplex s0(const FlowSimplex& S) {
  if (S.n() < 0) throw Error("degeneracy of an empty simplex");
  return degenerate(S, true);
}

FlowSimplex sn(const FlowSimplex& S) {
  if (S.n() < 0) throw Error("degeneracy of an empty simplex");
  if (S.n() >= 1) {
    // s_{n+1} on an initially degenerate simplex goes through s_0 s_n
    FlowSimplex base = face(S, 0);
    if (s0(base) == S) return s0(sn(base));
  }
  return degenerate(S, false);
}

FlowBimodule diagonal(const FlowCategory& F) {
  if (F.n() != 0) throw Error("diagonal expects a flow category");
  return s0(F);
}

FlowSimplex restrict_objects(const FlowSimplex& S, const std::function<bool(int, const FlowObject&)>& keep) {
  FlowSimplex T;
  T.gamma = S.gamma;
  T.truncation = S.truncation;
  T.signs = S.signs;
  std::vector<std::set<std::string>> kept(S.sets.size());
  for (std::size_t k = 0; k < S.sets.size(); ++k) {
    T.sets.emplace_back();
    for (const auto& o : S.sets[k])
      if (keep(static_cast<int>(k), o)) {
        T.sets.back().push_back(o);
        kept[k].insert(o.id);
      }
  }
  // a component survives iff both endpoints do
  std::map<Face, std::set<std::string>> alive;
  for (const auto& [f, cs] : S.cells)
    for (const auto& c : cs)
      if (kept[min_vertex(f)].count(c.source) && kept[max_vertex(f)].count(c.target)) alive[f].insert(c.id);
  for (const auto& [f, cs] : S.cells)
    for (const auto& c : cs) {
      if (!alive[f].count(c.id)) continue;
      Component d = c;
      d.facets.clear();
      for (const auto& fc : c.facets) {
        if (fc.kind == FacetKind::Break && !kept[fc.vertex].count(fc.object)) continue;
        Facet g = fc;
        g.entries.clear();
        const auto pcs = part_cells(f, fc);
        for (const auto& e : fc.entries) {
          bool ok = true;
          for (std::size_t t = 0; t < e.parts.size(); ++t) ok = ok && alive[pcs[t]].count(e.parts[t]);
          if (ok) g.entries.push_back(e);
        }
        if (!g.entries.empty()) d.facets.push_back(std::move(g));
      }
      T.cells[f].push_back(std::move(d));
    }
  canonicalize(T);
  return T;
}

FlowCategory restrict_objects(const FlowCategory& F, const std::function<bool(const FlowObject&)>& keep) {
  return restrict_objects(F, [&](int, const FlowObject& o) { return keep(o); });
}

FlowSimplex suspend(const FlowSimplex& S, int sign) {
  if (sign != 1 && sign != -1) throw Error("suspension sign must be +1 or -1");
  FlowSimplex T = S;
  for (auto& set : T.sets)
    for (auto& o : set) {
      (sign > 0 ? o.v.plus : o.v.minus) += 1;
      o.dim += sign;
    }
  for (auto& [f, cs] : T.cells)
    if (std::popcount(f) % 2 == 1)
      for (auto& c : cs) c.count = -c.count;
  return T;
}

FlowBimodule empty_bimodule(const FlowCategory& X, const FlowCategory& Y) {
  if (X.n() != 0 || Y.n() != 0) throw Error("empty_bimodule expects flow categories");
  if (!(X.gamma == Y.gamma)) throw Error("energy monoids differ");
  FlowBimodule B;
  B.gamma = X.gamma;
  B.signs = X.signs && Y.signs;
  B.truncation = std::min(X.truncation, Y.truncation);
  B.sets = {X.sets[0], Y.sets[0]};
  for (const auto& c : X.cell(1)) B.cells[1].push_back(c);
  for (const auto& c : Y.cell(1)) {
    Component d = c;
    for (auto& fc : d.facets) fc.vertex = 1;
    B.cells[2].push_back(d);
  }
  canonicalize(B);
  return B;
}

namespace {

Component prefixed(const Component& c, const std::string& px) {
  Component d = c;
  d.id = px + c.id;
  d.source = px + c.source;
  d.target = px + c.target;
  for (auto& fc : d.facets) {
    if (fc.kind == FacetKind::Break) fc.object = px + fc.object;
    for (auto& e : fc.entries)
      for (auto& p : e.parts) p = px + p;
  }
  return d;
}

}  // namespace

ConeResult cone(const FlowBimodule& B) {
  if (B.n() != 1) throw Error("cone expects a bimodule");
  ConeResult out;
  const FlowCategory X = endpoint(B, 0), Y = endpoint(B, 1);
  const FlowCategory SX = suspend(X, 1);

  Rational lb = 0;
  bool any = false;
  for (const auto& c : B.cell(3)) {
    if (!any || c.energy < lb) lb = c.energy;
    any = true;
  }
  if (any && lb < 0) {
    if (B.gamma.kind == GammaKind::Trivial) throw Error("negative energy with trivial gamma");
    out.energy_shift = (lb < 0 ? Rational(-lb) : lb) + 1;
  }

  FlowCategory& C = out.cone;
  C.gamma = B.gamma;
  C.signs = B.signs;
  C.truncation = B.truncation;
  C.sets.emplace_back();
  for (const auto& o : SX.sets[0]) C.sets[0].push_back({"X/" + o.id, o.v, o.dim});
  for (const auto& o : Y.sets[0]) C.sets[0].push_back({"Y/" + o.id, o.v, o.dim});
  auto& cc = C.cells[1];
  for (const auto& c : SX.cell(1)) cc.push_back(prefixed(c, "X/"));
  for (const auto& c : Y.cell(1)) cc.push_back(prefixed(c, "Y/"));
  for (const auto& c : B.cell(3)) {
    Component d = c;
    d.id = "B/" + c.id;
    d.source = "X/" + c.source;
    d.target = "Y/" + c.target;
    d.energy += out.energy_shift;
    for (auto& fc : d.facets) {
      if (fc.kind != FacetKind::Break) throw Error("cone: unexpected facet kind in a bimodule");
      const bool left = fc.vertex == 0;
      const int ratio = break_sign(0, 0) * break_sign(left ? 0 : 1, 1);
      fc.object = (left ? "X/" : "Y/") + fc.object;
      fc.vertex = 0;
      for (auto& e : fc.entries) {
        e.sign *= ratio;
        if (left) e.parts = {"X/" + e.parts[0], "B/" + e.parts[1]};
        else e.parts = {"B/" + e.parts[0], "Y/" + e.parts[1]};
      }
    }
    cc.push_back(std::move(d));
  }
  canonicalize(C);

  // I: Y → C from the diagonal of Y, targets renamed into C
  {
    FlowBimodule D = diagonal(Y);
    FlowBimodule& I = out.inclusion;
    I.gamma = B.gamma;
    I.signs = B.signs;
    I.truncation = std::min(D.truncation, C.truncation);
    I.sets = {Y.sets[0], C.sets[0]};
    I.cells[1] = Y.cell(1);
    for (const auto& c : C.cell(1)) {
      Component d = c;
      for (auto& fc : d.facets) fc.vertex = 1;
      I.cells[2].push_back(std::move(d));
    }
    for (auto c : D.cell(3)) {
      c.target = "Y/" + c.target;
      for (auto& fc : c.facets)
        if (fc.vertex == 1) {
          fc.object = "Y/" + fc.object;
          for (auto& e : fc.entries) e.parts[1] = "Y/" + e.parts[1];
        }
      I.cells[3].push_back(std::move(c));
    }
    canonicalize(I);
  }
  // P: C → ΣX from the diagonal of ΣX, sources renamed into C
  {
    FlowBimodule D = diagonal(SX);
    FlowBimodule& P = out.projection;
    P.gamma = B.gamma;
    P.signs = B.signs;
    P.truncation = std::min(D.truncation, C.truncation);
    P.sets = {C.sets[0], SX.sets[0]};
    P.cells[1] = C.cell(1);
    for (const auto& c : SX.cell(1)) {
      Component d = c;
      for (auto& fc : d.facets) fc.vertex = 1;
      P.cells[2].push_back(std::move(d));
    }
    for (auto c : D.cell(3)) {
      c.source = "X/" + c.source;
      for (auto& fc : c.facets)
        if (fc.vertex == 0) {
          fc.object = "X/" + fc.object;
          for (auto& e : fc.entries) e.parts[0] = "X/" + e.parts[0];
        }
      P.cells[3].push_back(std::move(c));
    }
    canonicalize(P);
  }
  return out;
}

namespace {

nlohmann::json object_to_json(const FlowObject& o) {
  return {{"id", o.id}, {"plus", o.v.plus}, {"minus", o.v.minus}, {"dim", o.dim}};
}

FlowObject object_from_json(const nlohmann::json& j) {
  FlowObject o;
  o.id = j.at("id").get<std::string>();
  o.v.plus = j.value("plus", 0);
  o.v.minus = j.value("minus", 0);
  o.dim = j.contains("dim") ? j.at("dim").get<int>() : o.v.value();
  return o;
}

nlohmann::json component_to_json(const Component& c) {
  nlohmann::json j{{"id", c.id},
                   {"source", c.source},
                   {"target", c.target},
                   {"energy", format_rational(c.energy)},
                   {"total_dim", c.total_dim},
                   {"obstruction_rank", c.obstruction_rank},
                   {"count", c.count.str()},
                   {"facets_available", c.facets_available}};
  nlohmann::json fs = nlohmann::json::array();
  for (const auto& f : c.facets) {
    nlohmann::json fj{{"kind", f.kind == FacetKind::Break ? "break" : "forget"}, {"vertex", f.vertex}};
    if (f.kind == FacetKind::Break) fj["object"] = f.object;
    nlohmann::json es = nlohmann::json::array();
    for (const auto& e : f.entries) es.push_back({{"parts", e.parts}, {"sign", e.sign}, {"added_rank", e.added_rank}});
    fj["entries"] = es;
    fs.push_back(fj);
  }
  j["facets"] = fs;
  return j;
}

Component component_from_json(const nlohmann::json& j) {
  Component c;
  c.id = j.at("id").get<std::string>();
  c.source = j.at("source").get<std::string>();
  c.target = j.at("target").get<std::string>();
  c.energy = parse_rational(j.value("energy", std::string("0")));
  c.total_dim = j.at("total_dim").get<int>();
  c.obstruction_rank = j.value("obstruction_rank", 0);
  const auto& cnt = j.contains("count") ? j.at("count") : nlohmann::json("0");
  c.count = cnt.is_string() ? parse_bigint(cnt.get<std::string>()) : BigInt(cnt.get<long long>());
  c.facets_available = j.value("facets_available", true);
  if (j.contains("facets"))
    for (const auto& fj : j.at("facets")) {
      Facet f;
      const std::string kind = fj.at("kind").get<std::string>();
      if (kind == "break") f.kind = FacetKind::Break;
      else if (kind == "forget") f.kind = FacetKind::Forget;
      else throw Error("unknown facet kind '" + kind + "'");
      f.vertex = fj.value("vertex", 0);
      if (f.kind == FacetKind::Break) f.object = fj.at("object").get<std::string>();
      for (const auto& ej : fj.at("entries")) {
        FacetEntry e;
        e.parts = ej.at("parts").get<std::vector<std::string>>();
        e.sign = ej.value("sign", 1);
        e.added_rank = ej.value("added_rank", 0);
        f.entries.push_back(std::move(e));
      }
      c.facets.push_back(std::move(f));
    }
  return c;
}

}  // namespace

nlohmann::json simplex_to_json(const FlowSimplex& S) {
  FlowSimplex T = S;
  canonicalize(T);
  nlohmann::json j;
  j["format"] = "flowcat-simplex-v1";
  j["gamma"] = gamma_name(T.gamma);
  j["truncation"] = T.truncation;
  j["signs"] = T.signs;
  j["sets"] = nlohmann::json::array();
  for (const auto& set : T.sets) {
    nlohmann::json s = nlohmann::json::array();
    for (const auto& o : set) s.push_back(object_to_json(o));
    j["sets"].push_back(s);
  }
  j["cells"] = nlohmann::json::array();
  for (const auto& [f, cs] : T.cells) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : cs) comps.push_back(component_to_json(c));
    j["cells"].push_back({{"face", face_vertices(f)}, {"components", comps}});
  }
  return j;
}

nlohmann::json category_to_json(const FlowCategory& F) {
  if (F.n() != 0) throw Error("category_to_json expects one object set");
  FlowCategory T = F;
  canonicalize(T);
  nlohmann::json j;
  j["format"] = "flowcat-category-v1";
  j["gamma"] = gamma_name(T.gamma);
  j["truncation"] = T.truncation;
  j["signs"] = T.signs;
  j["objects"] = nlohmann::json::array();
  for (const auto& o : T.sets[0]) j["objects"].push_back(object_to_json(o));
  j["components"] = nlohmann::json::array();
  for (const auto& c : T.cell(1)) j["components"].push_back(component_to_json(c));
  return j;
}

FlowSimplex simplex_from_json(const nlohmann::json& j) {
  FlowSimplex S;
  try {
    const std::string format = j.at("format").get<std::string>();
    S.gamma = gamma_from_name(j.value("gamma", std::string("trivial")));
    S.truncation = j.value("truncation", 1);
    S.signs = j.value("signs", true);
    if (format == "flowcat-category-v1") {
      S.sets.emplace_back();
      for (const auto& o : j.at("objects")) S.sets[0].push_back(object_from_json(o));
      if (j.contains("components"))
        for (const auto& c : j.at("components")) S.cells[1].push_back(component_from_json(c));
    } else if (format == "flowcat-simplex-v1") {
      for (const auto& s : j.at("sets")) {
        S.sets.emplace_back();
        for (const auto& o : s) S.sets.back().push_back(object_from_json(o));
      }
      if (S.sets.empty()) throw Error("simplex needs at least one object set");
      for (const auto& cj : j.at("cells")) {
        Face f = face_from_vertices(cj.at("face").get<std::vector<int>>());
        if (f == 0 || max_vertex(f) > S.n()) throw Error("cell " + format_face(f) + " outside the simplex");
        for (const auto& c : cj.at("components")) S.cells[f].push_back(component_from_json(c));
      }
    } else {
      throw Error("unknown format '" + format + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed flow data: ") + e.what());
  }
  canonicalize(S);
  return S;
}

std::string simplex_to_dot(const FlowSimplex& S) {
  std::ostringstream os;
  os << "digraph flow {\n  rankdir=LR;\n";
  for (int k = 0; k <= S.n(); ++k) {
    os << "  subgraph cluster_" << k << " {\n    label=\"set " << k << "\";\n";
    for (const auto& o : S.sets[k])
      os << "    \"" << k << ":" << o.id << "\" [label=\"" << o.id << " (" << o.dim << ")\"];\n";
    os << "  }\n";
  }
  for (const auto& [f, cs] : S.cells) {
    const int j = min_vertex(f), l = max_vertex(f);
    for (const auto& c : cs)
      os << "  \"" << j << ":" << c.source << "\" -> \"" << l << ":" << c.target << "\" [label=\"" << c.id
         << (c.vdim() == 0 ? " #" + c.count.str() : " dim " + std::to_string(c.vdim())) << "\""
         << (std::popcount(f) > 2 ? ", style=dashed" : "") << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace flowcat
