#include "flowcat/corner_model.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

namespace flowcat {

const std::vector<int> CornerCategory::kEmpty;

int CornerCategory::push_arrow(const std::string& id, int source, int target, bool identity) {
  if (arrow_index_.count(id)) throw Error("duplicate arrow id '" + id + "'");
  int a = static_cast<int>(arrows_.size());
  arrows_.push_back({id, source, target, identity});
  arrow_index_.emplace(id, a);
  objects_[source].out.push_back(a);
  objects_[target].in.push_back(a);
  between_[key(source, target)].push_back(a);
  return a;
}

int CornerCategory::add_object(const std::string& id, int codim) {
  if (object_index_.count(id)) throw Error("duplicate object id '" + id + "'");
  if (codim < 0) throw Error("negative codim for '" + id + "'");
  int o = static_cast<int>(objects_.size());
  objects_.push_back({id, codim, -1, {}, {}});
  object_index_.emplace(id, o);
  objects_[o].identity = push_arrow("id:" + id, o, o, true);
  return o;
}

int CornerCategory::add_arrow(const std::string& id, int source, int target) {
  if (source < 0 || source >= object_count() || target < 0 || target >= object_count())
    throw Error("arrow '" + id + "' references an unknown object");
  return push_arrow(id, source, target, false);
}

void CornerCategory::set_composite(int f, int g, int gf) {
  const auto& F = arrows_.at(f);
  const auto& G = arrows_.at(g);
  const auto& H = arrows_.at(gf);
  if (F.target != G.source) throw Error("composite of non-composable arrows");
  if (H.source != F.source || H.target != G.target) throw Error("composite has wrong endpoints");
  if (F.identity || G.identity) {
    if ((F.identity ? g : f) != gf) throw Error("composite with identity must be the other arrow");
    return;
  }
  table_[key(f, g)] = gf;
}

std::optional<int> CornerCategory::find_object(const std::string& id) const {
  auto it = object_index_.find(id);
  if (it == object_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> CornerCategory::find_arrow(const std::string& id) const {
  auto it = arrow_index_.find(id);
  if (it == arrow_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> CornerCategory::compose(int f, int g) const {
  const auto& F = arrows_.at(f);
  const auto& G = arrows_.at(g);
  if (F.target != G.source) return std::nullopt;
  if (F.identity) return g;
  if (G.identity) return f;
  auto it = table_.find(key(f, g));
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

const std::vector<int>& CornerCategory::arrows_between(int a, int b) const {
  auto it = between_.find(key(a, b));
  return it == between_.end() ? kEmpty : it->second;
}

std::vector<std::tuple<int, int, int>> CornerCategory::composition_table() const {
  std::vector<std::tuple<int, int, int>> out;
  out.reserve(table_.size());
  for (const auto& [k, v] : table_)
    out.emplace_back(static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu), v);
  std::sort(out.begin(), out.end());
  return out;
}

Overcategory overcategory(const CornerCategory& C, int p) {
  if (p < 0 || p >= C.object_count()) throw Error("overcategory: unknown object");
  Overcategory O;
  const auto& ins = C.arrows_into(p);
  std::map<int, int> local;  // ambient arrow -> overcategory object
  for (int f : ins) {
    local[f] = O.category.add_object(C.arrow(f).id, C.codim(C.arrow(f).source));
    O.object_arrow.push_back(f);
  }
  // morphism f → f' is h with f'∘h = f
  std::map<std::pair<int, int>, int> made;  // (ambient h, f') -> local arrow
  for (int f : ins) {
    for (int f2 : ins) {
      int a = C.arrow(f).source, b = C.arrow(f2).source;
      for (int h : C.arrows_between(a, b)) {
        if (C.arrow(h).identity) continue;
        auto comp = C.compose(h, f2);
        if (comp && *comp == f) {
          int la = O.category.add_arrow(C.arrow(h).id + "/" + C.arrow(f2).id, local[f], local[f2]);
          made[{h, f2}] = la;
        }
      }
    }
  }
  // composition inherited: (h1: f→f', h2: f'→f'') ↦ h2∘h1
  for (const auto& [k1, l1] : made) {
    auto [h1, f1] = k1;
    for (const auto& [k2, l2] : made) {
      auto [h2, f2] = k2;
      if (C.arrow(h2).source != C.arrow(h1).target) continue;
      if (O.category.arrow(l1).target != O.category.arrow(l2).source) continue;
      auto comp = C.compose(h1, h2);
      if (!comp) continue;
      auto it = made.find({*comp, f2});
      if (it != made.end()) O.category.set_composite(l1, l2, it->second);
    }
  }
  return O;
}

Overcategory overcategory(const CornerCategory& C, const std::string& p) {
  auto o = C.find_object(p);
  if (!o) throw Error("overcategory: unknown object '" + p + "'");
  return overcategory(C, *o);
}

namespace {

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Order relation of P^p and the atom set of every element. Fails with a
// message when P^p is not a poset.
struct OverPoset {
  std::vector<int> arrows;
  std::vector<int> rank;
  std::vector<std::vector<char>> leq;
  std::string error;
};

OverPoset over_poset(const CornerCategory& C, int p) {
  OverPoset P;
  P.arrows = C.arrows_into(p);
  const int N = static_cast<int>(P.arrows.size());
  P.rank.resize(N);
  P.leq.assign(N, std::vector<char>(N, 0));
  for (int i = 0; i < N; ++i) P.rank[i] = C.codim(C.arrow(P.arrows[i]).source);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      int a = C.arrow(P.arrows[i]).source, b = C.arrow(P.arrows[j]).source;
      int count = 0;
      for (int h : C.arrows_between(a, b)) {
        auto comp = C.compose(h, P.arrows[j]);
        if (comp && *comp == P.arrows[i]) ++count;
      }
      if (count > 1) {
        P.error = "overcategory not a poset: " + std::to_string(count) + " arrows from " +
                  C.arrow(P.arrows[i]).id + " to " + C.arrow(P.arrows[j]).id;
        return P;
      }
      P.leq[i][j] = static_cast<char>(count);
    }
  }
  return P;
}

}  // namespace

CornerReport check_corner_object(const CornerCategory& C, int p) {
  CornerReport R;
  R.objects_checked = 1;
  auto fail = [&](const std::string& msg) {
    R.ok = false;
    R.offending_object = p;
    R.first_violation = "object " + C.object_id(p) + ": " + msg;
    return R;
  };
  const int c = C.codim(p);
  if (c > 30) return fail("codim too large to check");
  for (int f : C.arrows_into(p)) {
    const auto& F = C.arrow(f);
    if (!F.identity && C.codim(F.source) >= c)
      return fail("arrow " + F.id + " does not increase codim");
  }
  OverPoset P = over_poset(C, p);
  if (!P.error.empty()) return fail(P.error);
  const int N = static_cast<int>(P.arrows.size());
  if (N != (1 << c))
    return fail("overcategory has " + std::to_string(N) + " objects, expected 2^" + std::to_string(c));
  for (int i = 0; i < N; ++i)
    if (!P.leq[i][i]) return fail("identity missing in overcategory");
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j && P.leq[i][j] && P.leq[j][i]) return fail("overcategory order not antisymmetric");
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (!P.leq[i][j]) continue;
      for (int k = 0; k < N; ++k)
        if (P.leq[j][k] && !P.leq[i][k]) return fail("overcategory order not transitive");
    }
  std::vector<long long> per_rank(c + 1, 0);
  for (int i = 0; i < N; ++i) {
    if (P.rank[i] < 0 || P.rank[i] > c) return fail("rank out of range");
    ++per_rank[P.rank[i]];
  }
  for (int r = 0; r <= c; ++r)
    if (per_rank[r] != binomial(c, r))
      return fail("rank " + std::to_string(r) + " has " + std::to_string(per_rank[r]) +
                  " objects, expected " + std::to_string(binomial(c, r)));
  // lattice: every pair has a least upper bound and a greatest lower bound
  if (N > 64) return fail("overcategory too large for the lattice check");
  std::vector<std::uint64_t> up(N, 0), down(N, 0);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (P.leq[i][j]) {
        up[i] |= std::uint64_t{1} << j;
        down[j] |= std::uint64_t{1} << i;
      }
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      const std::uint64_t U = up[i] & up[j], L = down[i] & down[j];
      bool join = false, meet = false;
      for (int k = 0; k < N && !(join && meet); ++k) {
        if (((U >> k) & 1) && (U & ~up[k]) == 0) join = true;
        if (((L >> k) & 1) && (L & ~down[k]) == 0) meet = true;
      }
      if (!join || !meet) return fail("overcategory is not a lattice");
    }
  }
  // atom sets give the isomorphism with the power set
  std::vector<int> atoms;
  for (int i = 0; i < N; ++i)
    if (P.rank[i] == 1) atoms.push_back(i);
  std::vector<std::uint32_t> mask(N, 0);
  for (int i = 0; i < N; ++i)
    for (std::size_t a = 0; a < atoms.size(); ++a)
      if (P.leq[atoms[a]][i]) mask[i] |= (1u << a);
  std::vector<char> seen(N, 0);
  for (int i = 0; i < N; ++i) {
    if (std::popcount(mask[i]) != P.rank[i]) return fail("rank differs from number of atoms below");
    if (seen[mask[i]]) return fail("two objects share the same atom set");
    seen[mask[i]] = 1;
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (static_cast<bool>(P.leq[i][j]) != ((mask[i] & ~mask[j]) == 0))
        return fail("order differs from inclusion of atom sets");
  return R;
}

CornerReport is_corner_model(const CornerCategory& C) {
  CornerReport R;
  for (int p = 0; p < C.object_count(); ++p) {
    CornerReport r = check_corner_object(C, p);
    ++R.objects_checked;
    if (!r.ok) {
      r.objects_checked = R.objects_checked;
      return r;
    }
  }
  return R;
}

NormalSet q_set(const CornerCategory& C, int p) {
  CornerReport r = check_corner_object(C, p);
  if (!r.ok) throw Error("q_set: not a corner model at " + C.object_id(p) + " (" + r.first_violation + ")");
  NormalSet Q;
  for (int f : C.arrows_into(p))
    if (C.codim(C.arrow(f).source) == 1) Q.elements.push_back(f);
  std::sort(Q.elements.begin(), Q.elements.end());
  return Q;
}

namespace {

// Atoms of P^q lying below the object f (an arrow into q).
std::vector<int> atoms_below(const CornerCategory& C, const std::vector<int>& atoms, int f) {
  std::vector<int> out;
  int b = C.arrow(f).source;
  for (int e : atoms) {
    int a = C.arrow(e).source;
    for (int h : C.arrows_between(a, b)) {
      auto comp = C.compose(h, f);
      if (comp && *comp == e) {
        out.push_back(e);
        break;
      }
    }
  }
  return out;
}

}  // namespace

ArrowDecomposition decompose_arrow(const CornerCategory& C, int alpha) {
  if (alpha < 0 || alpha >= C.arrow_count()) throw Error("decompose_arrow: arrow not in category");
  const int p = C.arrow(alpha).source, q = C.arrow(alpha).target;
  ArrowDecomposition D;
  D.source_part = q_set(C, p);
  NormalSet Qq = q_set(C, q);
  for (int e : D.source_part.elements) {
    auto comp = C.compose(e, alpha);
    if (!comp) throw Error("decompose_arrow: composite missing from table");
    D.source_image.push_back(*comp);
  }
  auto below_alpha = atoms_below(C, Qq.elements, alpha);
  for (int gamma : C.arrows_out_of(p)) {
    int b = C.arrow(gamma).target;
    if (C.codim(b) != C.codim(p) + 1) continue;
    for (int beta : C.arrows_between(b, q)) {
      auto comp = C.compose(gamma, beta);
      if (!comp || *comp != alpha) continue;
      auto below_beta = atoms_below(C, Qq.elements, beta);
      std::vector<int> extra;
      std::set_difference(below_beta.begin(), below_beta.end(), below_alpha.begin(), below_alpha.end(),
                          std::back_inserter(extra));
      if (extra.size() != 1) throw Error("decompose_arrow: factorization adds " + std::to_string(extra.size()) + " normal directions");
      D.boundary_part.emplace_back(gamma, beta);
      D.boundary_image.push_back(extra[0]);
    }
  }
  return D;
}

Report validate_category(const CornerCategory& C) {
  Report R;
  for (int f = 0; f < C.arrow_count(); ++f) {
    const auto& F = C.arrow(f);
    if (!F.identity && C.codim(F.target) <= C.codim(F.source))
      R.fail("arrow " + F.id + " does not increase codim");
  }
  for (auto [f, g, gf] : C.composition_table()) {
    int c = C.arrow(g).target;
    for (int h : C.arrows_out_of(c)) {
      if (C.arrow(h).identity) continue;
      auto hg = C.compose(g, h);
      auto lhs = C.compose(gf, h);
      if (!hg || !lhs) continue;
      auto rhs = C.compose(f, *hg);
      if (rhs && *rhs != *lhs)
        R.fail("associativity fails for " + C.arrow(f).id + ", " + C.arrow(g).id + ", " + C.arrow(h).id);
    }
  }
  return R;
}

CornerCategory simplex_face_category(int n) {
  if (n < 0 || n > 12) throw Error("simplex_face_category: n out of range");
  CornerCategory C;
  const std::uint32_t full = (1u << (n + 1)) - 1;
  auto name = [](std::uint32_t s) {
    std::string out = "[";
    bool first = true;
    for (int i = 0; i < 32; ++i)
      if (s & (1u << i)) {
        if (!first) out += ",";
        out += std::to_string(i);
        first = false;
      }
    return out + "]";
  };
  std::vector<int> obj(full + 1, -1);
  // larger faces first so the interior gets index 0
  std::vector<std::uint32_t> faces;
  for (std::uint32_t s = 1; s <= full; ++s) faces.push_back(s);
  std::stable_sort(faces.begin(), faces.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) > std::popcount(b); });
  for (auto s : faces) obj[s] = C.add_object(name(s), n + 1 - std::popcount(s));
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> arr;
  for (auto s : faces)
    for (auto t : faces)
      if (t != s && (t & s) == t) arr[{s, t}] = C.add_arrow(name(s) + ">" + name(t), obj[s], obj[t]);
  for (const auto& [st, f] : arr) {
    auto [s, t] = st;
    for (std::uint32_t u = t; u; u = (u - 1) & t) {
      if (u == t) continue;
      C.set_composite(f, arr.at({t, u}), arr.at({s, u}));
    }
  }
  return C;
}

nlohmann::json corner_to_json(const CornerCategory& C) {
  nlohmann::json j;
  j["format"] = "flowcat-corner-v1";
  j["objects"] = nlohmann::json::array();
  for (int o = 0; o < C.object_count(); ++o)
    j["objects"].push_back({{"id", C.object_id(o)}, {"codim", C.codim(o)}});
  j["arrows"] = nlohmann::json::array();
  for (int a = 0; a < C.arrow_count(); ++a) {
    const auto& A = C.arrow(a);
    if (A.identity) continue;
    j["arrows"].push_back({{"id", A.id}, {"source", C.object_id(A.source)}, {"target", C.object_id(A.target)}});
  }
  j["composition"] = nlohmann::json::array();
  for (auto [f, g, gf] : C.composition_table())
    j["composition"].push_back({C.arrow(f).id, C.arrow(g).id, C.arrow(gf).id});
  return j;
}

CornerCategory corner_from_json(const nlohmann::json& j) {
  CornerCategory C;
  try {
    for (const auto& o : j.at("objects")) C.add_object(o.at("id").get<std::string>(), o.at("codim").get<int>());
    for (const auto& a : j.at("arrows")) {
      auto s = C.find_object(a.at("source").get<std::string>());
      auto t = C.find_object(a.at("target").get<std::string>());
      if (!s || !t) throw Error("arrow references unknown object");
      C.add_arrow(a.at("id").get<std::string>(), *s, *t);
    }
    if (j.contains("composition")) {
      for (const auto& e : j.at("composition")) {
        auto f = C.find_arrow(e.at(0).get<std::string>());
        auto g = C.find_arrow(e.at(1).get<std::string>());
        auto h = C.find_arrow(e.at(2).get<std::string>());
        if (!f || !g || !h) throw Error("composition references unknown arrow");
        C.set_composite(*f, *g, *h);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed corner category: ") + e.what());
  }
  return C;
}

std::string corner_to_dot(const CornerCategory& C) {
  std::ostringstream os;
  os << "digraph corner {\n  rankdir=BT;\n";
  for (int o = 0; o < C.object_count(); ++o)
    os << "  n" << o << " [label=\"" << C.object_id(o) << "\\ncodim " << C.codim(o) << "\"];\n";
  for (int a = 0; a < C.arrow_count(); ++a) {
    const auto& A = C.arrow(a);
    if (A.identity) continue;
    if (C.codim(A.target) != C.codim(A.source) + 1) continue;  // covering arrows only
    os << "  n" << A.source << " -> n" << A.target << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace flowcat
