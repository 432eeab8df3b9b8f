#include "flowcat/bimodule_alg.hpp"

#include "flowcat/kernels.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <unordered_map>

namespace flowcat {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

Component remap_vertices(Component c, const std::vector<int>& map) {
  for (auto& fc : c.facets) fc.vertex = map.at(fc.vertex);
  return c;
}

bool same_category(const FlowCategory& a, const FlowCategory& b) {
  return a.sets == b.sets && a.cell(1) == b.cell(1);
}

// B(p,q) components as a vector plus id lookup.
struct Side {
  const std::vector<Component>* comps;
  std::unordered_map<std::string, int> by_id;
  explicit Side(const std::vector<Component>& cs) : comps(&cs) {
    for (int i = 0; i < static_cast<int>(cs.size()); ++i) by_id.emplace(cs[i].id, i);
  }
  const Component& operator[](int i) const { return (*comps)[i]; }
  int size() const { return static_cast<int>(comps->size()); }
};

}  // namespace

CompositionResult compose_bimodules_detailed(const FlowBimodule& B12, const FlowBimodule& B23) {
  if (B12.n() != 1 || B23.n() != 1) throw Error("compose expects two bimodules");
  if (!(B12.gamma == B23.gamma)) throw Error("compose: energy monoids differ");
  if (!same_category(endpoint(B12, 1), endpoint(B23, 0))) throw Error("compose: middle categories do not match");

  CompositionResult out;
  FlowBimodule& C = out.composite;
  C.gamma = B12.gamma;
  C.signs = B12.signs && B23.signs;
  C.truncation = std::min({B12.truncation, B23.truncation, 1});
  C.sets = {B12.sets[0], B23.sets[1]};
  C.cells[1] = B12.cell(1);
  C.cells[2] = B23.cell(2);

  const Side L(B12.cell(3)), R(B23.cell(3));
  // products (i, j) with L[i].target == R[j].source
  std::vector<std::pair<int, int>> prods;
  std::map<std::pair<int, int>, int> prod_index;
  {
    std::unordered_map<std::string, std::vector<int>> right_by_source;
    for (int j = 0; j < R.size(); ++j) right_by_source[R[j].source].push_back(j);
    for (int i = 0; i < L.size(); ++i) {
      auto it = right_by_source.find(L[i].target);
      if (it == right_by_source.end()) continue;
      for (int j : it->second) {
        prod_index[{i, j}] = static_cast<int>(prods.size());
        prods.push_back({i, j});
      }
    }
  }
  // (y, b) → component of B23 whose left break carries that entry
  std::map<std::pair<std::string, std::string>, int> left_entry;
  for (int j = 0; j < R.size(); ++j)
    for (const auto& fc : R[j].facets)
      if (fc.kind == FacetKind::Break && fc.vertex == 0)
        for (const auto& e : fc.entries) left_entry[{e.parts[0], e.parts[1]}] = j;

  UnionFind uf(static_cast<int>(prods.size()));
  std::vector<char> glued_missing(prods.size(), 0);
  for (int k = 0; k < static_cast<int>(prods.size()); ++k) {
    const auto [i, j] = prods[k];
    for (const auto& fc : L[i].facets) {
      if (fc.kind != FacetKind::Break || fc.vertex != 1) continue;
      for (const auto& e : fc.entries) {
        auto it = left_entry.find({e.parts[1], R[j].id});
        auto ai = L.by_id.find(e.parts[0]);
        if (it == left_entry.end() || ai == L.by_id.end()) {
          glued_missing[k] = 1;
          continue;
        }
        uf.unite(k, prod_index.at({ai->second, it->second}));
      }
    }
  }

  // classes in order of their smallest product
  std::map<int, std::vector<int>> classes;
  for (int k = 0; k < static_cast<int>(prods.size()); ++k) classes[uf.find(k)].push_back(k);
  std::vector<std::string> class_id(prods.size());
  auto product_name = [&](int k) { return L[prods[k].first].id + "*" + R[prods[k].second].id; };
  for (auto& [root, members] : classes) {
    std::vector<std::string> names;
    for (int k : members) names.push_back(product_name(k));
    std::sort(names.begin(), names.end());
    std::string id = names.front();
    if (names.size() > 1) {
      id = "[" + names.front();
      for (std::size_t t = 1; t < names.size(); ++t) id += "|" + names[t];
      id += "]";
    }
    for (int k : members) class_id[k] = id;
  }

  std::vector<std::pair<int, std::vector<int>>> class_list(classes.begin(), classes.end());
  std::vector<Component> built(class_list.size());
  std::vector<std::string> errors(class_list.size());
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
  for (int ci = 0; ci < static_cast<int>(class_list.size()); ++ci) {
    const auto& members = class_list[ci].second;
    const auto [i0, j0] = prods[members.front()];
    Component c;
    c.id = class_id[members.front()];
    c.source = L[i0].source;
    c.target = R[j0].target;
    c.energy = L[i0].energy + R[j0].energy;
    c.total_dim = L[i0].total_dim + R[j0].total_dim;
    c.obstruction_rank = L[i0].obstruction_rank + R[j0].obstruction_rank;
    c.count = L[i0].count * R[j0].count;
    bool available = true;
    for (int k : members) {
      const auto [i, j] = prods[k];
      if (L[i].total_dim + R[j].total_dim != c.total_dim ||
          L[i].obstruction_rank + R[j].obstruction_rank != c.obstruction_rank || L[i].energy + R[j].energy != c.energy)
        errors[ci] = "glued pieces of " + c.id + " have different dimensions or energies";
      available = available && L[i].facets_available && R[j].facets_available && !glued_missing[k];
    }
    if (c.vdim() != 0) c.count = 0;
    if (c.vdim() > C.truncation || !available) {
      c.facets_available = false;
      built[ci] = std::move(c);
      continue;
    }
    std::map<std::tuple<int, int, std::string>, Facet> facets;
    auto add = [&](int vertex, const std::string& object, FacetEntry e) {
      auto& f = facets[{0, vertex, object}];
      f.kind = FacetKind::Break;
      f.vertex = vertex;
      f.object = object;
      f.entries.push_back(std::move(e));
    };
    for (int k : members) {
      const auto [i, j] = prods[k];
      const Component& a = L[i];
      const Component& b = R[j];
      for (const auto& fc : a.facets) {
        if (fc.kind != FacetKind::Break || fc.vertex != 0) continue;
        for (const auto& e : fc.entries) {
          auto ai = L.by_id.find(e.parts[1]);
          if (ai == L.by_id.end()) continue;
          auto pk = prod_index.find({ai->second, j});
          if (pk == prod_index.end()) continue;
          add(0, fc.object, {{e.parts[0], class_id[pk->second]}, e.sign, e.added_rank});
        }
      }
      const int orient = (a.total_dim % 2 == 0) ? 1 : -1;
      for (const auto& fc : b.facets) {
        if (fc.kind != FacetKind::Break || fc.vertex != 1) continue;
        for (const auto& e : fc.entries) {
          auto bi = R.by_id.find(e.parts[0]);
          if (bi == R.by_id.end()) continue;
          auto pk = prod_index.find({i, bi->second});
          if (pk == prod_index.end()) continue;
          add(1, fc.object, {{class_id[pk->second], e.parts[1]}, orient * e.sign, e.added_rank});
        }
      }
    }
    for (auto& [key, f] : facets) c.facets.push_back(std::move(f));
    built[ci] = std::move(c);
  }
  for (const auto& e : errors)
    if (!e.empty()) throw CheckFailure("compose: " + e);
  int unavailable = 0;
  for (std::size_t ci = 0; ci < class_list.size(); ++ci) {
    if (!built[ci].facets_available) ++unavailable;
    auto& pieces = out.pieces[built[ci].id];
    for (int k : class_list[ci].second) pieces.push_back({L[prods[k].first].id, R[prods[k].second].id});
    std::sort(pieces.begin(), pieces.end());
    C.cells[3].push_back(std::move(built[ci]));
  }
  int missing = 0;
  for (char m : glued_missing) missing += m;
  if (missing) out.notes.push_back(std::to_string(missing) + " products lack a gluing partner in the middle category");
  if (unavailable)
    out.notes.push_back(std::to_string(unavailable) + " composite components carry no facet data (chain level only)");
  canonicalize(C);

  const IntMatrix expected = count_matrix(B23, 3) * count_matrix(B12, 3);
  const IntMatrix got = count_matrix(C, 3);
  if (!(got == expected))
    throw CheckFailure("compose: chain map of the composite is not the product",
                       {"residual", format_matrix(got - expected)});
  return out;
}

FlowBimodule compose_bimodules(const FlowBimodule& B12, const FlowBimodule& B23) {
  return compose_bimodules_detailed(B12, B23).composite;
}

FlowSimplex assemble_two_simplex(const FlowBimodule& e01, const FlowBimodule& e12, const FlowBimodule& e02) {
  if (e01.n() != 1 || e12.n() != 1 || e02.n() != 1) throw Error("two-simplex edges must be bimodules");
  if (!same_category(endpoint(e01, 1), endpoint(e12, 0)) || !same_category(endpoint(e01, 0), endpoint(e02, 0)) ||
      !same_category(endpoint(e12, 1), endpoint(e02, 1)))
    throw Error("two-simplex edges do not share their vertices");
  FlowSimplex S;
  S.gamma = e01.gamma;
  S.signs = e01.signs && e12.signs && e02.signs;
  S.truncation = std::min({e01.truncation, e12.truncation, e02.truncation});
  S.sets = {e01.sets[0], e01.sets[1], e12.sets[1]};
  const std::vector<int> id{0, 1}, shift{1, 2}, outer{0, 2};
  auto put = [&](Face target, const std::vector<Component>& cs, const std::vector<int>& map) {
    for (const auto& c : cs) S.cells[target].push_back(remap_vertices(c, map));
  };
  put(1, e01.cell(1), id);
  put(2, e01.cell(2), id);
  put(4, e12.cell(2), shift);
  put(3, e01.cell(3), id);
  put(6, e12.cell(3), shift);
  put(5, e02.cell(3), outer);
  canonicalize(S);
  return S;
}

TwoSimplexHomotopy homotopy_from_2simplex(const FlowSimplex& H, Ring ring) {
  if (H.n() != 2) throw Error("expected a 2-simplex");
  TwoSimplexHomotopy out;
  out.simplex = H;
  out.h = count_matrix(H, 7);
  out.f01 = count_matrix(H, 3);
  out.f12 = count_matrix(H, 6);
  out.f02 = count_matrix(H, 5);
  const IntMatrix dx = count_matrix(H, 1), dz = count_matrix(H, 4);
  IntMatrix residual = dz * out.h + out.h * dx - (out.f02 - out.f12 * out.f01);
  if (ring == Ring::Z2) residual = residual.mod2();
  if (!residual.is_zero())
    throw CheckFailure("homotopy identity fails: d h + h d != f02 - f12 f01", {"residual", format_matrix(residual)});
  return out;
}

namespace {

// Adds one unit top component of count -1 per (source, target) pair, then
// the interval fillers.
FlowSimplex with_unit_homotopy(FlowSimplex S, const std::vector<std::pair<std::string, std::string>>& pairs,
                               const Rational& energy) {
  auto& top = S.cells[7];
  for (const auto& [p, r] : pairs) {
    Component c;
    c.id = "h(" + p + ")";
    c.source = p;
    c.target = r;
    c.energy = energy;
    c.count = -1;
    top.push_back(std::move(c));
  }
  fill_intervals(S, 7, "J");
  canonicalize(S);
  return S;
}

}  // namespace

FlowSimplex null_homotopy_IB(const FlowBimodule& B) {
  const ConeResult cr = cone(B);
  const FlowCategory X = endpoint(B, 0);
  FlowSimplex S = assemble_two_simplex(B, cr.inclusion, empty_bimodule(X, cr.cone));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& o : X.sets[0]) pairs.push_back({o.id, "X/" + o.id});
  return with_unit_homotopy(std::move(S), pairs, -cr.energy_shift);
}

FlowSimplex null_homotopy_BP(const FlowBimodule& B) {
  const ConeResult cr = cone(B);
  const FlowBimodule SB = suspend(B, 1);
  FlowSimplex S = assemble_two_simplex(cr.projection, SB, empty_bimodule(cr.cone, endpoint(SB, 1)));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& o : B.sets[1]) pairs.push_back({"Y/" + o.id, o.id});
  return with_unit_homotopy(std::move(S), pairs, -cr.energy_shift);
}

FlowSimplex null_homotopy_PI(const FlowBimodule& B) {
  const ConeResult cr = cone(B);
  FlowSimplex S =
      assemble_two_simplex(cr.inclusion, cr.projection, empty_bimodule(endpoint(B, 1), endpoint(cr.projection, 1)));
  return with_unit_homotopy(std::move(S), {}, 0);
}

}  // namespace flowcat
