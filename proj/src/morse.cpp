#include "flowcat/morse.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

namespace flowcat {

std::string SimplicialComplex::name(int c) const {
  std::string s = "[";
  for (std::size_t i = 0; i < cells[c].size(); ++i) s += (i ? "," : "") + vertices[cells[c][i]];
  return s + "]";
}

int SimplicialComplex::find(const std::vector<std::string>& labels) const {
  std::vector<int> v;
  for (const auto& l : labels) {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), l);
    if (it == vertices.end() || *it != l) return -1;
    v.push_back(static_cast<int>(it - vertices.begin()));
  }
  std::sort(v.begin(), v.end());
  auto it = index.find(v);
  return it == index.end() ? -1 : it->second;
}

std::vector<int> SimplicialComplex::maximal() const {
  std::vector<int> out;
  for (int c = 0; c < size(); ++c)
    if (cofaces[c].empty()) out.push_back(c);
  return out;
}

SimplicialComplex complex_from_simplices(const std::vector<std::vector<std::string>>& simplices) {
  SimplicialComplex K;
  std::set<std::string> labels;
  for (const auto& s : simplices) {
    if (s.empty()) throw Error("complex: empty simplex");
    std::set<std::string> seen(s.begin(), s.end());
    if (seen.size() != s.size()) throw Error("complex: duplicate vertex in a simplex");
    if (s.size() > 20) throw Error("complex: simplex dimension too large");
    labels.insert(s.begin(), s.end());
  }
  K.vertices.assign(labels.begin(), labels.end());

  std::set<std::vector<int>> all;
  for (const auto& s : simplices) {
    std::vector<int> v;
    for (const auto& l : s) v.push_back(static_cast<int>(std::lower_bound(K.vertices.begin(), K.vertices.end(), l) -
                                                         K.vertices.begin()));
    std::sort(v.begin(), v.end());
    const int n = static_cast<int>(v.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> f;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) f.push_back(v[i]);
      all.insert(f);
    }
  }
  K.cells.assign(all.begin(), all.end());
  std::stable_sort(K.cells.begin(), K.cells.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  for (int c = 0; c < K.size(); ++c) K.index[K.cells[c]] = c;
  K.faces.assign(K.size(), {});
  K.cofaces.assign(K.size(), {});
  for (int c = 0; c < K.size(); ++c) {
    const auto& v = K.cells[c];
    if (v.size() < 2) continue;
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::vector<int> f = v;
      f.erase(f.begin() + static_cast<long>(i));
      const int fc = K.index.at(f);
      const int sign = (i % 2 == 0) ? 1 : -1;
      K.faces[c].push_back({fc, sign});
      K.cofaces[fc].push_back({c, sign});
    }
  }
  for (auto& cf : K.cofaces) std::sort(cf.begin(), cf.end());
  return K;
}

SimplicialComplex parse_complex(const nlohmann::json& j) {
  const nlohmann::json* list = &j;
  if (j.is_object()) {
    if (!j.contains("simplices")) throw Error("complex: expected a 'simplices' list");
    list = &j.at("simplices");
  }
  if (!list->is_array()) throw Error("complex: expected a list of simplices");
  std::vector<std::vector<std::string>> simplices;
  for (const auto& s : *list) {
    if (!s.is_array()) throw Error("complex: simplex is not a list");
    std::vector<std::string> v;
    for (const auto& x : s) {
      if (x.is_string())
        v.push_back(x.get<std::string>());
      else if (x.is_number_integer())
        v.push_back(std::to_string(x.get<long long>()));
      else
        throw Error("complex: vertex labels must be strings");
    }
    simplices.push_back(std::move(v));
  }
  return complex_from_simplices(simplices);
}

nlohmann::json complex_to_json(const SimplicialComplex& K) {
  nlohmann::json out = nlohmann::json::array();
  for (int c : K.maximal()) {
    nlohmann::json s = nlohmann::json::array();
    for (int v : K.cells[c]) s.push_back(K.vertices[v]);
    out.push_back(s);
  }
  return {{"simplices", out}};
}

namespace {

std::vector<std::string> cell_labels(const SimplicialComplex& K, int c) {
  std::vector<std::string> v;
  for (int x : K.cells[c]) v.push_back(K.vertices[x]);
  return v;
}

int incidence(const SimplicialComplex& K, int tau, int sigma) {
  for (const auto& [f, s] : K.faces[tau])
    if (f == sigma) return s;
  return 0;
}

// up[σ] = τ if (σ, τ) is matched, down[τ] = σ.
struct Partners {
  std::vector<int> up, down;
};

Partners partners(const SimplicialComplex& K, const Matching& V) {
  Partners P{std::vector<int>(K.size(), -1), std::vector<int>(K.size(), -1)};
  for (const auto& [s, t] : V.pairs) {
    if (s < 0 || t < 0 || s >= K.size() || t >= K.size()) throw Error("matching: cell index out of range");
    P.up[s] = t;
    P.down[t] = s;
  }
  return P;
}

void require_valid(const SimplicialComplex& K, const Matching& V) {
  auto r = validate_matching(K, V);
  if (!r.ok) throw CheckFailure("invalid matching: " + r.reason);
}

std::vector<int> critical_positions(const SimplicialComplex& K, const std::vector<int>& crit) {
  std::vector<int> pos(K.size(), -1);
  for (std::size_t i = 0; i < crit.size(); ++i) pos[crit[i]] = static_cast<int>(i);
  return pos;
}

// Boundary ∂ on all cells, d(i, j) = coefficient of cell i in ∂ cell j.
IntMatrix boundary_matrix(const SimplicialComplex& K) {
  IntMatrix d(K.size(), K.size());
  for (int c = 0; c < K.size(); ++c)
    for (const auto& [f, s] : K.faces[c]) d(f, c) = s;
  return d;
}

IntMatrix v_matrix(const SimplicialComplex& K, const Matching& V) {
  IntMatrix m(K.size(), K.size());
  for (const auto& [s, t] : V.pairs) m(t, s) = -incidence(K, t, s);
  return m;
}

IntMatrix phi_matrix(const SimplicialComplex& K, const Matching& V) {
  const IntMatrix d = boundary_matrix(K), v = v_matrix(K, V);
  return IntMatrix::identity(K.size()) + d * v + v * d;
}

// Powers Φ⁰ … Φᴺ with Φᴺ⁺¹ = Φᴺ.
std::vector<IntMatrix> phi_powers(const SimplicialComplex& K, const Matching& V) {
  const IntMatrix phi = phi_matrix(K, V);
  std::vector<IntMatrix> pw{IntMatrix::identity(K.size())};
  for (int i = 0; i <= K.size() + 1; ++i) {
    IntMatrix next = pw.back() * phi;
    if (next == pw.back()) return pw;
    pw.push_back(std::move(next));
  }
  throw CheckFailure("flow Φ does not stabilise; matching is not acyclic");
}

}  // namespace

Matching parse_matching(const SimplicialComplex& K, const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "greedy") return greedy_matching(K);
    throw Error("matching: unknown keyword '" + j.get<std::string>() + "'");
  }
  const nlohmann::json* list = &j;
  if (j.is_object() && j.contains("pairs")) list = &j.at("pairs");
  if (!list->is_array()) throw Error("matching: expected a list of [sigma, tau] pairs");
  Matching V;
  for (const auto& p : *list) {
    if (!p.is_array() || p.size() != 2) throw Error("matching: each pair must be [sigma, tau]");
    std::vector<int> cs;
    for (const auto& side : p) {
      std::vector<std::string> labels;
      for (const auto& x : side) labels.push_back(x.is_string() ? x.get<std::string>() : x.dump());
      const int c = K.find(labels);
      if (c < 0) throw Error("matching: cell " + side.dump() + " is not in the complex");
      cs.push_back(c);
    }
    V.pairs.push_back({cs[0], cs[1]});
  }
  return V;
}

nlohmann::json matching_to_json(const SimplicialComplex& K, const Matching& V) {
  auto pairs = V.pairs;
  std::sort(pairs.begin(), pairs.end());
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [s, t] : pairs) out.push_back({cell_labels(K, s), cell_labels(K, t)});
  return out;
}

namespace {

// Collapse scheme shared by the greedy and random generators. pick(n)
// chooses among n candidates; greedy takes the first free face and the
// last maximal cell.
Matching collapse_matching(const SimplicialComplex& K, const std::function<int(int, bool)>& pick) {
  Matching V;
  std::vector<char> alive(K.size(), 1);
  std::vector<int> alive_cofaces(K.size());
  for (int c = 0; c < K.size(); ++c) alive_cofaces[c] = static_cast<int>(K.cofaces[c].size());
  int remaining = K.size();
  auto kill = [&](int c) {
    alive[c] = 0;
    --remaining;
    for (const auto& [f, s] : K.faces[c]) --alive_cofaces[f];
  };
  while (remaining > 0) {
    std::vector<int> free_faces;
    for (int c = 0; c < K.size(); ++c)
      if (alive[c] && alive_cofaces[c] == 1) free_faces.push_back(c);
    if (!free_faces.empty()) {
      const int f = free_faces[pick(static_cast<int>(free_faces.size()), true)];
      int top = -1;
      for (const auto& [t, s] : K.cofaces[f])
        if (alive[t]) top = t;
      V.pairs.push_back({f, top});
      kill(top);
      kill(f);
      continue;
    }
    std::vector<int> tops;
    for (int c = 0; c < K.size(); ++c)
      if (alive[c] && alive_cofaces[c] == 0) tops.push_back(c);
    kill(tops[pick(static_cast<int>(tops.size()), false)]);
  }
  std::sort(V.pairs.begin(), V.pairs.end());
  return V;
}

}  // namespace

Matching greedy_matching(const SimplicialComplex& K) {
  return collapse_matching(K, [](int n, bool free) { return free ? 0 : n - 1; });
}

Matching random_matching(const SimplicialComplex& K, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return collapse_matching(K, [&](int n, bool) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); });
}

MatchingReport validate_matching(const SimplicialComplex& K, const Matching& V) {
  MatchingReport R;
  std::vector<int> used(K.size(), 0);
  std::vector<int> up(K.size(), -1);
  for (const auto& [s, t] : V.pairs) {
    if (s < 0 || t < 0 || s >= K.size() || t >= K.size()) {
      R.ok = false;
      R.reason = "pair references a missing cell";
      return R;
    }
    if (incidence(K, t, s) == 0) {
      R.ok = false;
      R.reason = "pair (" + K.name(s) + ", " + K.name(t) + ") is not a facet pair";
      return R;
    }
    if (used[s]++ || used[t]++) {
      R.ok = false;
      R.reason = "cell " + (used[s] > 1 ? K.name(s) : K.name(t)) + " is matched twice";
      return R;
    }
    up[s] = t;
  }
  // Modified Hasse digraph: τ → σ for facets, reversed on matched pairs.
  auto out_edges = [&](int c) {
    std::vector<int> e;
    for (const auto& [f, s] : K.faces[c])
      if (up[f] != c) e.push_back(f);
    if (up[c] >= 0) e.push_back(up[c]);
    return e;
  };
  std::vector<int> color(K.size(), 0), parent(K.size(), -1);
  for (int root = 0; root < K.size(); ++root) {
    if (color[root]) continue;
    std::vector<std::pair<int, std::vector<int>>> stack;
    stack.push_back({root, out_edges(root)});
    color[root] = 1;
    while (!stack.empty()) {
      auto& [c, edges] = stack.back();
      if (edges.empty()) {
        color[c] = 2;
        stack.pop_back();
        continue;
      }
      const int nx = edges.back();
      edges.pop_back();
      if (color[nx] == 1) {
        std::vector<int> cyc{nx};
        for (int x = c; x != nx; x = parent[x]) cyc.push_back(x);
        std::reverse(cyc.begin() + 1, cyc.end());
        R.ok = false;
        R.cycle = cyc;
        std::string s;
        for (int x : cyc) s += K.name(x) + " -> ";
        R.reason = "cycle in the modified Hasse diagram: " + s + K.name(nx);
        return R;
      }
      if (color[nx] == 0) {
        color[nx] = 1;
        parent[nx] = c;
        stack.push_back({nx, out_edges(nx)});
      }
    }
  }
  return R;
}

std::vector<int> critical_cells(const SimplicialComplex& K, const Matching& V) {
  std::vector<char> matched(K.size(), 0);
  for (const auto& [s, t] : V.pairs) matched[s] = matched[t] = 1;
  std::vector<int> out;
  for (int c = 0; c < K.size(); ++c)
    if (!matched[c]) out.push_back(c);
  return out;
}

std::vector<GradientPath> gradient_paths(const SimplicialComplex& K, const Matching& V, int critical_cell) {
  const Partners P = partners(K, V);
  std::vector<GradientPath> out;
  std::vector<int> cells{critical_cell};
  std::function<void(int, int, int)> walk = [&](int s, int from_tau, int w) {
    // s: current (k-1)-cell reached from from_tau with weight w
    cells.push_back(s);
    if (P.up[s] < 0 && P.down[s] < 0) {
      out.push_back({cells, w});
    } else if (P.up[s] >= 0 && P.up[s] != from_tau) {
      const int t = P.up[s];
      cells.push_back(t);
      const int a = -incidence(K, t, s);
      for (const auto& [f, sg] : K.faces[t])
        if (f != s) walk(f, t, w * a * sg);
      cells.pop_back();
    }
    cells.pop_back();
  };
  for (const auto& [f, sg] : K.faces[critical_cell]) walk(f, critical_cell, sg);
  std::sort(out.begin(), out.end(), [](const GradientPath& a, const GradientPath& b) { return a.cells < b.cells; });
  return out;
}

IntMatrix morse_differential_paths(const SimplicialComplex& K, const Matching& V) {
  require_valid(K, V);
  const auto crit = critical_cells(K, V);
  const auto pos = critical_positions(K, crit);
  const int n = static_cast<int>(crit.size());
  IntMatrix d(n, n);
  for (int j = 0; j < n; ++j)
    for (const auto& p : gradient_paths(K, V, crit[j])) d(pos[p.cells.back()], j) += p.weight;
  return d;
}

std::vector<BigInt> morse_flow_column(const SimplicialComplex& K, const Matching& V, const std::vector<int>& crit_pos,
                                      int critical_cell) {
  const Partners P = partners(K, V);
  const int k = K.dim(critical_cell);
  // (k-1)-cells in topological order of s → faces of up[s].
  std::vector<int> layer;
  for (int c = 0; c < K.size(); ++c)
    if (K.dim(c) == k - 1) layer.push_back(c);
  std::vector<int> indeg(K.size(), 0);
  for (int s : layer)
    if (P.up[s] >= 0 && K.dim(P.up[s]) == k)
      for (const auto& [f, sg] : K.faces[P.up[s]])
        if (f != s) ++indeg[f];
  std::vector<int> order, queue;
  for (int s : layer)
    if (indeg[s] == 0) queue.push_back(s);
  while (!queue.empty()) {
    const int s = queue.back();
    queue.pop_back();
    order.push_back(s);
    if (P.up[s] >= 0)
      for (const auto& [f, sg] : K.faces[P.up[s]])
        if (f != s && --indeg[f] == 0) queue.push_back(f);
  }
  std::vector<BigInt> x(K.size(), 0);
  for (const auto& [f, sg] : K.faces[critical_cell]) x[f] += sg;
  int n_crit = 0;
  for (int p : crit_pos) n_crit = std::max(n_crit, p + 1);
  std::vector<BigInt> col(n_crit, 0);
  for (int s : order) {
    if (x[s] == 0) continue;
    if (crit_pos[s] >= 0) {
      col[crit_pos[s]] += x[s];
    } else if (P.up[s] >= 0 && P.up[s] != critical_cell) {
      const int t = P.up[s];
      const BigInt a = x[s] * -incidence(K, t, s);
      for (const auto& [f, sg] : K.faces[t])
        if (f != s) x[f] += a * sg;
    }
  }
  return col;
}

IntMatrix morse_differential_flow(const SimplicialComplex& K, const Matching& V) {
  require_valid(K, V);
  const auto crit = critical_cells(K, V);
  const auto pos = critical_positions(K, crit);
  const int n = static_cast<int>(crit.size());
  IntMatrix d(n, n);
  for (int j = 0; j < n; ++j) {
    const auto col = morse_flow_column(K, V, pos, crit[j]);
    for (int i = 0; i < static_cast<int>(col.size()); ++i) d(i, j) = col[i];
  }
  return d;
}

MorseFlowOutput morse_flow_category(const SimplicialComplex& K, const Matching& V) {
  require_valid(K, V);
  MorseFlowOutput out;
  out.critical = critical_cells(K, V);
  std::vector<FlowObject> objects;
  for (int c : out.critical) objects.push_back({K.name(c), {K.dim(c), 0}, K.dim(c)});
  out.category = make_category(std::move(objects));
  auto& cell = out.category.cells[1];
  for (int c : out.critical) {
    std::map<int, int> seen;
    for (const auto& p : gradient_paths(K, V, c)) {
      const int t = p.cells.back();
      Component comp;
      comp.id = K.name(c) + ">" + K.name(t) + "#" + std::to_string(seen[t]++);
      comp.source = K.name(c);
      comp.target = K.name(t);
      comp.count = p.weight;
      cell.push_back(std::move(comp));
    }
  }
  fill_intervals(out.category, 1, "I");
  out.reconstructed = true;
  canonicalize(out.category);
  return out;
}

IntMatrix flow_limit(const SimplicialComplex& K, const Matching& V) {
  require_valid(K, V);
  return phi_powers(K, V).back();
}

IntMatrix morse_inclusion(const SimplicialComplex& K, const Matching& V) {
  const IntMatrix inf = flow_limit(K, V);
  const auto crit = critical_cells(K, V);
  IntMatrix m(K.size(), static_cast<int>(crit.size()));
  for (int j = 0; j < static_cast<int>(crit.size()); ++j)
    for (int i = 0; i < K.size(); ++i) m(i, j) = inf(i, crit[j]);
  return m;
}

IntMatrix morse_projection(const SimplicialComplex& K, const Matching& V) {
  const IntMatrix inf = flow_limit(K, V);
  const auto crit = critical_cells(K, V);
  IntMatrix m(static_cast<int>(crit.size()), K.size());
  for (int i = 0; i < static_cast<int>(crit.size()); ++i)
    for (int j = 0; j < K.size(); ++j) m(i, j) = inf(crit[i], j);
  return m;
}

IntMatrix continuation_map(const SimplicialComplex& K, const Matching& V0, const Matching& V1) {
  return morse_projection(K, V1) * morse_inclusion(K, V0);
}

IntMatrix continuation_homotopy(const SimplicialComplex& K, const Matching& V0, const Matching& V1) {
  require_valid(K, V1);
  const auto pw = phi_powers(K, V1);
  const IntMatrix v1 = v_matrix(K, V1);
  // 1 - Φᴺ = -(∂H + H∂) with H = Σ_{i<N} Φⁱ V.
  IntMatrix H(K.size(), K.size());
  for (std::size_t i = 0; i + 1 < pw.size(); ++i) H = H + pw[i] * v1;
  return -(morse_projection(K, V0) * H * morse_inclusion(K, V0));
}

namespace {

// Bimodule X → Y whose vdim-0 components realize f entry by entry.
FlowBimodule bimodule_from_matrix(const FlowCategory& X, const FlowCategory& Y, const IntMatrix& f) {
  FlowBimodule B;
  B.gamma = X.gamma;
  B.sets = {X.sets[0], Y.sets[0]};
  B.cells[1] = X.cell(1);
  B.cells[2] = Y.cell(1);
  for (auto& c : B.cells[2])
    for (auto& fc : c.facets) fc.vertex = 1;
  auto& mid = B.cells[3];
  for (int j = 0; j < f.cols(); ++j)
    for (int i = 0; i < f.rows(); ++i) {
      const BigInt& m = f(i, j);
      const BigInt reps = m < 0 ? BigInt(-m) : m;
      for (BigInt r = 0; r < reps; ++r) {
        Component c;
        c.source = X.sets[0][j].id;
        c.target = Y.sets[0][i].id;
        c.id = c.source + ">" + c.target + "#" + format_bigint(r);
        c.count = m < 0 ? -1 : 1;
        mid.push_back(std::move(c));
      }
    }
  fill_intervals(B, 3, "I");
  canonicalize(B);
  return B;
}

}  // namespace

FlowBimodule continuation_bimodule(const SimplicialComplex& K, const Matching& V0, const Matching& V1) {
  const auto X = morse_flow_category(K, V0);
  const auto Y = morse_flow_category(K, V1);
  return bimodule_from_matrix(X.category, Y.category, continuation_map(K, V0, V1));
}

IntMatrix simplicial_chain_map(const SimplicialComplex& K, const SimplicialComplex& L,
                               const std::map<std::string, std::string>& vertex_map) {
  std::vector<int> img(K.vertices.size());
  for (std::size_t v = 0; v < K.vertices.size(); ++v) {
    auto it = vertex_map.find(K.vertices[v]);
    if (it == vertex_map.end()) throw Error("vertex map: no image for " + K.vertices[v]);
    auto pos = std::lower_bound(L.vertices.begin(), L.vertices.end(), it->second);
    if (pos == L.vertices.end() || *pos != it->second) throw Error("vertex map: unknown target vertex " + it->second);
    img[v] = static_cast<int>(pos - L.vertices.begin());
  }
  IntMatrix f(L.size(), K.size());
  for (int c = 0; c < K.size(); ++c) {
    std::vector<int> w;
    for (int v : K.cells[c]) w.push_back(img[v]);
    // sign of the sorting permutation; repeated vertices give a degenerate image
    int sign = 1;
    bool degenerate = false;
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t j = i + 1; j < w.size(); ++j) {
        if (w[i] == w[j]) degenerate = true;
        if (w[i] > w[j]) sign = -sign;
      }
    if (degenerate) continue;
    std::sort(w.begin(), w.end());
    auto it = L.index.find(w);
    if (it == L.index.end()) throw Error("vertex map: image of " + K.name(c) + " is not a simplex");
    f(it->second, c) = sign;
  }
  return f;
}

FlowBimodule simplicial_map_bimodule(const SimplicialComplex& K, const Matching& VK, const SimplicialComplex& L,
                                     const Matching& VL, const std::map<std::string, std::string>& vertex_map) {
  const auto X = morse_flow_category(K, VK);
  const auto Y = morse_flow_category(L, VL);
  const IntMatrix f = morse_projection(L, VL) * simplicial_chain_map(K, L, vertex_map) * morse_inclusion(K, VK);
  return bimodule_from_matrix(X.category, Y.category, f);
}

ChainComplex simplicial_chain_complex(const SimplicialComplex& K, Ring ring) {
  std::vector<std::string> labels;
  std::vector<int> degrees;
  for (int c = 0; c < K.size(); ++c) {
    labels.push_back(K.name(c));
    degrees.push_back(K.dim(c));
  }
  return make_complex(ring, labels, degrees, boundary_matrix(K));
}

}  // namespace flowcat
