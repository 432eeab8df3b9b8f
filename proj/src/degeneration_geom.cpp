#include "flowcat/degeneration_geom.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace flowcat {

Rational default_epsilon() { return Rational(1, 2); }

namespace {

Rational product(const std::vector<Rational>& p, int d) {
  Rational r = 1;
  for (int i = 0; i < d; ++i) r *= p[i];
  return r;
}

void check_epsilon(const Rational& e) {
  if (e <= 0 || e >= 1) throw Error("epsilon must lie in (0,1), got " + format_rational(e));
}

std::string coord_name(int j) { return "x" + std::to_string(j + 1); }

std::string block_name(int d, int flag) { return "L(" + std::to_string(d) + "," + std::to_string(flag) + ")"; }

}  // namespace

bool lblock_nonempty(int d, int flag) { return d >= 1 && (flag == 0 || flag == 1); }

bool lblock_contains(const LBlock& L, const std::vector<Rational>& point) {
  if (L.flag != 0 && L.flag != 1) throw Error("lblock: flag must be 0 or 1");
  if (L.d < 0) throw Error("lblock: negative d");
  check_epsilon(L.epsilon);
  if (static_cast<int>(point.size()) != L.dimension())
    throw Error("lblock_contains: expected " + std::to_string(L.dimension()) + " coordinates, got " +
                std::to_string(point.size()));
  for (const auto& c : point)
    if (c < 0 || c > 1) return false;
  const Rational P = product(point, L.d);
  if (L.flag == 0) return P <= L.epsilon;
  const Rational w = 1 - point[L.d];
  return w * w + P * P / (L.epsilon * L.epsilon) <= 1;
}

std::vector<LFacet> lblock_facets(int d, int flag) {
  std::vector<LFacet> out;
  if (!lblock_nonempty(d, flag)) return out;
  for (int j = 0; j < d; ++j) {
    LFacet f;
    f.kind = LFacetKind::Zero;
    f.coord = j;
    f.tag = coord_name(j) + "=0";
    out.push_back(f);
  }
  // x_j = 1 on L_{1,1} would be a copy of L_{0,1}, which is empty: dropped.
  if (flag == 0 || d >= 2)
    for (int j = 0; j < d; ++j) {
      LFacet f;
      f.kind = LFacetKind::One;
      f.coord = j;
      f.target_d = d - 1;
      f.target_flag = flag;
      f.nonempty = lblock_nonempty(d - 1, flag);
      f.tag = coord_name(j) + "=1 -> " + block_name(d - 1, flag);
      out.push_back(f);
    }
  if (flag == 1) {
    LFacet f;
    f.kind = LFacetKind::YOne;
    f.target_d = d;
    f.target_flag = 0;
    f.tag = "y=1 -> " + block_name(d, 0);
    out.push_back(f);
  }
  LFacet h;
  h.kind = LFacetKind::Hypersurface;
  h.tag = "hypersurface";
  out.push_back(h);
  return out;
}

namespace {

bool on_facet(const LBlock& L, const LFacet& f, const std::vector<Rational>& p) {
  switch (f.kind) {
    case LFacetKind::Zero:
      return p[f.coord] == 0;
    case LFacetKind::One:
      return p[f.coord] == 1;
    case LFacetKind::YOne:
      return p[L.d] == 1;
    case LFacetKind::Hypersurface: {
      const Rational P = product(p, L.d);
      if (L.flag == 0) return P == L.epsilon;
      const Rational w = 1 - p[L.d];
      return w * w + P * P / (L.epsilon * L.epsilon) == 1;
    }
  }
  return false;
}

// m values in (0,1) with product tau ∈ (0,1).
std::vector<Rational> split_product(int m, const Rational& tau) {
  if (m == 1) return {tau};
  Rational t = Rational(1, 2);
  for (int s = 1;; ++s) {
    t = 1 - Rational(1, BigInt(1) << s);
    Rational tp = 1;
    for (int i = 0; i < m - 1; ++i) tp *= t;
    if (tp > tau) {
      std::vector<Rational> v(m - 1, t);
      v.push_back(tau / tp);
      return v;
    }
  }
}

// m values in (0,1) with product < tau.
std::vector<Rational> small_product(int m, const Rational& tau) {
  std::vector<Rational> v(m, Rational(1, 2));
  if (m > 0) v[0] = tau / 2;
  return v;
}

}  // namespace

std::vector<LFacet> classify_point(const LBlock& L, const std::vector<Rational>& point) {
  if (!lblock_contains(L, point)) throw Error("classify_point: point is not in the block");
  std::vector<LFacet> out;
  for (const auto& f : lblock_facets(L.d, L.flag))
    if (on_facet(L, f, point)) out.push_back(f);
  return out;
}

std::optional<std::vector<Rational>> face_witness(const LBlock& L, const LFace& f) {
  check_epsilon(L.epsilon);
  if (L.d < 0 || L.d > 31) throw Error("face_witness: d out of range");
  const std::uint32_t all = (1u << L.d) - 1;
  if ((f.zero | f.one) & ~all) throw Error("face_witness: coordinate out of range");
  if (f.y_one && L.flag == 0) throw Error("face_witness: y=1 on a flag-0 block");
  if (!lblock_nonempty(L.d, L.flag)) return std::nullopt;
  if (f.zero & f.one) return std::nullopt;
  std::vector<int> free;
  for (int j = 0; j < L.d; ++j)
    if (!((f.zero | f.one) >> j & 1)) free.push_back(j);
  const int m = static_cast<int>(free.size());
  std::vector<Rational> p(L.dimension(), 0);
  for (int j = 0; j < L.d; ++j)
    if (f.one >> j & 1) p[j] = 1;
  auto assign = [&](const std::vector<Rational>& v) {
    for (int i = 0; i < m; ++i) p[free[i]] = v[i];
  };
  const Rational& e = L.epsilon;
  if (f.zero) {
    if (L.flag == 0 && f.hyper) return std::nullopt;
    if (L.flag == 1 && f.hyper && f.y_one) return std::nullopt;
    assign(std::vector<Rational>(m, Rational(1, 2)));
    if (L.flag == 1) p[L.d] = f.hyper ? Rational(0) : (f.y_one ? Rational(1) : Rational(1, 2));
  } else if (L.flag == 0 || f.y_one) {
    if (m == 0) return std::nullopt;  // product 1 > ε
    assign(f.hyper ? split_product(m, e) : small_product(m, e));
    if (L.flag == 1) p[L.d] = 1;
  } else {
    if (m == 0) return std::nullopt;  // 1/ε² > 1
    // y = 2/5 makes 1 − (1−y)² = (4/5)²
    p[L.d] = f.hyper ? Rational(2, 5) : Rational(1, 2);
    assign(f.hyper ? split_product(m, e * 4 / 5) : small_product(m, e));
  }
  // the witness must lie on exactly the requested facets
  if (!lblock_contains(L, p)) throw CheckFailure("face_witness: witness outside the block");
  for (const auto& fc : lblock_facets(L.d, L.flag)) {
    bool want = false;
    switch (fc.kind) {
      case LFacetKind::Zero: want = f.zero >> fc.coord & 1; break;
      case LFacetKind::One: want = f.one >> fc.coord & 1; break;
      case LFacetKind::YOne: want = f.y_one; break;
      case LFacetKind::Hypersurface: want = f.hyper; break;
    }
    if (on_facet(L, fc, p) != want) throw CheckFailure("face_witness: witness misses facet " + fc.tag);
  }
  return p;
}

std::vector<Rational> coface(const std::vector<Rational>& point, int j, int flag) {
  const int d = static_cast<int>(point.size()) - flag;
  if (d < 0 || j < 0 || j > d) throw Error("coface: index out of range");
  std::vector<Rational> out = point;
  out.insert(out.begin() + j, Rational(1));
  return out;
}

std::vector<Rational> flag_inclusion(const std::vector<Rational>& point) {
  std::vector<Rational> out = point;
  out.push_back(1);
  return out;
}

namespace {

// All points of grid^dim.
template <class F>
void for_grid(const std::vector<Rational>& grid, int dim, F&& f) {
  std::vector<int> idx(dim, 0);
  std::vector<Rational> p(dim);
  for (;;) {
    for (int i = 0; i < dim; ++i) p[i] = grid[idx[i]];
    f(p);
    int i = 0;
    while (i < dim && ++idx[i] == static_cast<int>(grid.size())) idx[i++] = 0;
    if (i == dim) return;
  }
}

using FacetKey = std::pair<int, int>;  // (kind, coord)

FacetKey key(const LFacet& f) { return {static_cast<int>(f.kind), f.coord}; }

std::set<FacetKey> keys(const std::vector<LFacet>& fs) {
  std::set<FacetKey> s;
  for (const auto& f : fs) s.insert(key(f));
  return s;
}

// single-facet face of a block
LFace facet_face(const LFacet& f) {
  LFace F;
  switch (f.kind) {
    case LFacetKind::Zero: F.zero = 1u << f.coord; break;
    case LFacetKind::One: F.one = 1u << f.coord; break;
    case LFacetKind::YOne: F.y_one = true; break;
    case LFacetKind::Hypersurface: F.hyper = true; break;
  }
  return F;
}

}  // namespace

CosimplicialReport cosimplicial_check(int max_d, const Rational& epsilon) {
  if (max_d < 0 || max_d > 6) throw Error("cosimplicial_check: max_d must be in [0,6]");
  check_epsilon(epsilon);
  CosimplicialReport R;
  std::vector<Rational> grid{0, Rational(1, 3), epsilon, 1};
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::mt19937_64 rng(20240601);
  auto random_point = [&](int dim) {
    std::vector<Rational> p(dim);
    for (auto& c : p) {
      const int b = 1 + static_cast<int>(rng() % 8);
      c = Rational(static_cast<int>(rng() % (b + 1)), b);
    }
    return p;
  };

  for (int d = 0; d <= max_d; ++d)
    for (int flag = 0; flag <= 1; ++flag) {
      const LBlock L{d, flag, epsilon};
      const auto facets = lblock_facets(d, flag);
      // facet counts and gluing targets
      std::size_t want = 0;
      if (lblock_nonempty(d, flag)) want = flag == 0 ? 2 * d + 1 : (d == 1 ? 3 : 2 * d + 2);
      if (facets.size() != want)
        R.report.fail(block_name(d, flag) + ": " + std::to_string(facets.size()) + " facets, expected " +
                      std::to_string(want));
      for (const auto& f : facets) {
        const bool has = face_witness(L, facet_face(f)).has_value();
        if (has != f.nonempty) R.report.fail(block_name(d, flag) + ": facet " + f.tag + " nonempty flag is wrong");
        if (f.kind == LFacetKind::One && (f.target_d != d - 1 || f.target_flag != flag))
          R.report.fail(block_name(d, flag) + ": facet " + f.tag + " has the wrong target");
        if (f.kind == LFacetKind::YOne && (f.target_d != d || f.target_flag != 0))
          R.report.fail(block_name(d, flag) + ": facet " + f.tag + " has the wrong target");
      }
      if (d == 0) continue;
      const LBlock Lm{d - 1, flag, epsilon};

      // δ_j identifies L_{d−1} with the slice x_j = 1
      auto slice = [&](const std::vector<Rational>& p) {
        const bool in_small = lblock_contains(Lm, p);
        for (int j = 0; j < d; ++j) {
          ++R.points_checked;
          if (lblock_contains(L, coface(p, j, flag)) != in_small) {
            std::ostringstream os;
            os << block_name(d, flag) << ": slice x" << j + 1 << "=1 disagrees with " << block_name(d - 1, flag);
            R.report.fail(os.str());
            return;
          }
        }
      };
      for_grid(grid, Lm.dimension(), slice);
      for (int s = 0; s < 64; ++s) slice(random_point(Lm.dimension()));

      // δ_j δ_k = δ_{k+1} δ_j for j ≤ k
      if (d >= 2)
        for_grid(grid, d - 2 + flag, [&](const std::vector<Rational>& p) {
          for (int k = 0; k <= d - 2; ++k)
            for (int j = 0; j <= k; ++j) {
              ++R.identities_checked;
              if (coface(coface(p, k, flag), j, flag) != coface(coface(p, j, flag), k + 1, flag)) {
                R.report.fail("cosimplicial identity fails for j=" + std::to_string(j) + ", k=" + std::to_string(k));
                return;
              }
            }
        });

      // facets of L_{d−1} go to facets of L_d under δ_j, plus x_j = 1
      for (const auto& f : lblock_facets(d - 1, flag)) {
        const auto w = face_witness(Lm, facet_face(f));
        if (!w) continue;
        for (int j = 0; j < d; ++j) {
          std::set<FacetKey> expect{{static_cast<int>(LFacetKind::One), j}};
          FacetKey k = key(f);
          if (f.kind == LFacetKind::Zero || f.kind == LFacetKind::One) k.second += k.second >= j ? 1 : 0;
          expect.insert(k);
          ++R.identities_checked;
          if (keys(classify_point(L, coface(*w, j, flag))) != expect)
            R.report.fail(block_name(d - 1, flag) + " facet " + f.tag + " does not land on the matching facet of " +
                          block_name(d, flag) + " under x" + std::to_string(j + 1) + "=1");
        }
      }

      if (flag == 1) {
        // η: L_{d,0} → L_{d,1}, y = 1, and η δ_j = δ_j η
        const LBlock L0{d, 0, epsilon};
        auto eta = [&](const std::vector<Rational>& p) {
          ++R.points_checked;
          if (lblock_contains(L, flag_inclusion(p)) != lblock_contains(L0, p))
            R.report.fail(block_name(d, 1) + ": slice y=1 disagrees with " + block_name(d, 0));
        };
        for_grid(grid, d, eta);
        for (int s = 0; s < 64; ++s) eta(random_point(d));
        for_grid(grid, d - 1, [&](const std::vector<Rational>& p) {
          for (int j = 0; j < d; ++j) {
            ++R.identities_checked;
            if (flag_inclusion(coface(p, j, 0)) != coface(flag_inclusion(p), j, 1))
              R.report.fail("y=1 inclusion does not commute with x" + std::to_string(j + 1) + "=1");
          }
        });
        for (const auto& f : lblock_facets(d, 0)) {
          const auto w = face_witness(L0, facet_face(f));
          if (!w) continue;
          std::set<FacetKey> expect{key(f), {static_cast<int>(LFacetKind::YOne), -1}};
          ++R.identities_checked;
          if (keys(classify_point(L, flag_inclusion(*w))) != expect)
            R.report.fail(block_name(d, 0) + " facet " + f.tag + " does not land on the facet list of " +
                          block_name(d, 1));
        }
      }
    }
  return R;
}

// ---- conic bundles ----

TP1 tp1(const Rational& x, const Rational& y) {
  if (x < 0 || y < 0) throw Error("TP1 coordinates must be nonnegative");
  if (x == 0 && y == 0) throw Error("TP1 coordinates must not both vanish");
  const Rational m = std::max(x, y);
  return {x / m, y / m};
}

TP1 tp1_from_ratio(const std::optional<Rational>& s) {
  if (!s) return {1, 0};
  if (*s < 0) throw Error("TP1 ratio must be nonnegative");
  if (*s <= 1) return {*s, 1};
  return {1, 1 / *s};
}

std::optional<Rational> tp1_ratio(const TP1& z) {
  if (z.y == 0) return std::nullopt;
  return z.x / z.y;
}

namespace {

bool normalized(const TP1& z) { return z.x >= 0 && z.y >= 0 && std::max(z.x, z.y) == 1; }

void check_base(const std::vector<Rational>& t) {
  for (const auto& c : t)
    if (c < 0) throw Error("conic base coordinates must be nonnegative");
}

}  // namespace

bool conic_contains(const std::vector<Rational>& t, const std::vector<TP1>& z) {
  check_base(t);
  if (z.size() != t.size() + 1) return false;
  for (const auto& f : z)
    if (!normalized(f)) return false;
  for (std::size_t i = 1; i < z.size(); ++i)
    if (z[i - 1].x * z[i].y != t[i - 1] * z[i - 1].y * z[i].x) return false;
  return true;
}

std::vector<TP1> ConicComponent::point(const std::optional<Rational>& s) const {
  const int n = window_hi + 1 + static_cast<int>(constant_factors.size()) - window_lo;
  std::vector<TP1> z(n);
  for (std::size_t c = 0; c < constant_factors.size(); ++c) z[constant_factors[c]] = constants[c];
  for (int i = window_lo; i <= window_hi; ++i)
    z[i] = tp1_from_ratio(s ? std::optional<Rational>(*s * scale[i - window_lo]) : std::nullopt);
  return z;
}

bool ConicComponent::contains(const std::vector<TP1>& z) const {
  const std::size_t n = window_hi + 1 + constant_factors.size() - window_lo;
  if (z.size() != n) return false;
  for (std::size_t c = 0; c < constant_factors.size(); ++c)
    if (!(z[constant_factors[c]] == constants[c])) return false;
  const auto r = tp1_ratio(z[window_lo]);
  return z == point(r);
}

std::vector<ConicComponent> conic_fiber(int n, const std::vector<Rational>& t) {
  if (n < 0) throw Error("conic_fiber: n must be nonnegative");
  if (static_cast<int>(t.size()) != n)
    throw Error("conic_fiber: expected " + std::to_string(n) + " base coordinates, got " + std::to_string(t.size()));
  check_base(t);
  // j_0 = 0, zeros (1-based), j_{k+1} = n + 1
  std::vector<int> js{0};
  for (int i = 1; i <= n; ++i)
    if (t[i - 1] == 0) js.push_back(i);
  js.push_back(n + 1);
  std::vector<ConicComponent> out;
  for (std::size_t r = 0; r + 1 < js.size(); ++r) {
    ConicComponent c;
    c.index = static_cast<int>(r);
    c.window_lo = js[r];
    c.window_hi = js[r + 1] - 1;
    // x_{i−1}/y_{i−1} = t_i · x_i/y_i inside the window
    c.scale.push_back(1);
    for (int i = c.window_lo + 1; i <= c.window_hi; ++i) c.scale.push_back(c.scale.back() / t[i - 1]);
    for (int i = 0; i <= n; ++i) {
      if (i >= c.window_lo && i <= c.window_hi) continue;
      c.constant_factors.push_back(i);
      c.constants.push_back(i < c.window_lo ? TP1{0, 1} : TP1{1, 0});
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Rational> random_conic_base(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Rational> t(n);
  for (auto& c : t) {
    if (rng() % 3 == 0) {
      c = 0;
    } else {
      c = Rational(1 + static_cast<int>(rng() % 20), 1 + static_cast<int>(rng() % 7));
    }
  }
  return t;
}

bool conic_sample_check(int max_n, long index, std::uint64_t seed) {
  const int n = static_cast<int>(index % (max_n + 1));
  const auto t = random_conic_base(n, seed * 1000003u + static_cast<std::uint64_t>(index));
  const auto comps = conic_fiber(n, t);
  const auto zeros = std::count(t.begin(), t.end(), Rational(0));
  if (static_cast<long>(comps.size()) != zeros + 1) return false;
  const std::vector<std::optional<Rational>> params{Rational(0), Rational(1, 3), Rational(1), Rational(7, 2),
                                                    std::nullopt};
  for (const auto& c : comps)
    for (const auto& s : params) {
      const auto z = c.point(s);
      if (!conic_contains(t, z) || !c.contains(z)) return false;
      // projection to a window factor recovers s; other components are
      // constant on that factor
      for (int i = c.window_lo; i <= c.window_hi; ++i) {
        const auto r = tp1_ratio(z[i]);
        if (!s) {
          if (r) return false;
        } else if (!r || *r != *s * c.scale[i - c.window_lo]) {
          return false;
        }
        for (const auto& o : comps) {
          if (o.index == c.index) continue;
          if (!(o.point(Rational(0))[i] == o.point(std::nullopt)[i])) return false;
        }
      }
    }
  return true;
}

long conic_sample_serial(int max_n, long count, std::uint64_t seed) {
  long failures = 0;
  for (long i = 0; i < count; ++i)
    if (!conic_sample_check(max_n, i, seed)) ++failures;
  return failures;
}

namespace {

std::vector<TP1> repeat(const TP1& z, int count) { return std::vector<TP1>(count, z); }

std::vector<TP1> concat(std::vector<TP1> a, const std::vector<TP1>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// D_{a+1} × [0,∞)^b → D_{a+b+2} and [0,∞)^a × D_{b+1} → D_{a+b+2}
std::vector<TP1> embed_left(const std::vector<TP1>& z, int b) { return concat(z, repeat({1, 0}, b + 1)); }
std::vector<TP1> embed_right(int a, const std::vector<TP1>& w) { return concat(repeat({0, 1}, a + 1), w); }

std::vector<Rational> join_base(std::vector<Rational> a, const std::vector<Rational>& b) {
  a.push_back(0);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::string d_name(int k) { return "D_" + std::to_string(k); }
std::string cube_name(int k) { return "[0,inf)^" + std::to_string(k); }

}  // namespace

ConicStrataReport conic_boundary_strata(int n, int m, std::uint64_t seed) {
  if (n < 0 || m < 0) throw Error("conic_boundary_strata: n, m must be nonnegative");
  ConicStrataReport R;
  const int N = n + m + 1;
  {
    ConicStratum s;
    s.label = d_name(n + 1) + " x " + cube_name(m);
    for (int i = 0; i <= N; ++i) s.factors.push_back(i <= n ? "D" : "(1:0)");
    s.block_lo = 0;
    s.block_hi = n;
    R.strata.push_back(s);
  }
  {
    ConicStratum s;
    s.label = cube_name(n) + " x " + d_name(m + 1);
    for (int i = 0; i <= N; ++i) s.factors.push_back(i <= n ? "(0:1)" : "D");
    s.block_lo = n + 1;
    s.block_hi = N;
    R.strata.push_back(s);
  }
  {
    ConicStratum s;
    s.label = d_name(0) + " x " + cube_name(N);
    s.factors.assign(N + 1, "(1:0)");
    R.strata.push_back(s);
  }
  {
    ConicStratum s;
    s.label = cube_name(N) + " x " + d_name(0);
    s.factors.assign(N + 1, "(0:1)");
    R.strata.push_back(s);
  }

  const std::vector<std::optional<Rational>> params{Rational(0), Rational(2, 3), Rational(5), std::nullopt};
  for (int sample = 0; sample < 24; ++sample) {
    const auto ta = random_conic_base(n, seed * 7919u + 2 * sample);
    const auto tb = random_conic_base(m, seed * 7919u + 2 * sample + 1);
    const auto t = join_base(ta, tb);
    const auto left = conic_fiber(n, ta), right = conic_fiber(m, tb), full = conic_fiber(N, t);
    // the fibre over t_{n+1} = 0 is exactly the union of the two images
    if (full.size() != left.size() + right.size()) {
      R.report.fail("fibre over t_" + std::to_string(n + 1) + "=0 has " + std::to_string(full.size()) +
                    " components, expected " + std::to_string(left.size() + right.size()));
      continue;
    }
    for (const auto& s : params) {
      for (std::size_t c = 0; c < full.size(); ++c) {
        const auto z = full[c].point(s);
        const auto img = c < left.size() ? embed_left(left[c].point(s), m)
                                         : embed_right(n, right[c - left.size()].point(s));
        if (z != img) R.report.fail("component " + std::to_string(c) + " is not the image of its embedding");
        if (!conic_contains(t, img)) R.report.fail("embedded point is not in the total space");
      }
    }
    // interval ends: sections over the whole base
    if (!conic_contains(t, repeat({1, 0}, N + 1)) || !conic_contains(t, repeat({0, 1}, N + 1)))
      R.report.fail("interval-end strata are not contained in the fibre");
    if (!(full.back().point(Rational(0)) == repeat({0, 1}, N + 1)) ||
        !(full.front().point(std::nullopt) == repeat({1, 0}, N + 1)))
      R.report.fail("interval-end strata are not the ends of the fibre");
  }

  // double degeneration t_{n+1} = t_{n+m+2} = 0: both routes agree
  for (int ell = 0; ell <= 1; ++ell)
    for (int sample = 0; sample < 8; ++sample) {
      const auto ta = random_conic_base(n, seed * 31u + 3 * sample);
      const auto tm = random_conic_base(m, seed * 31u + 3 * sample + 1);
      const auto tc = random_conic_base(ell, seed * 31u + 3 * sample + 2);
      const auto t = join_base(join_base(ta, tm), tc);
      for (const auto& c : conic_fiber(m, tm))
        for (const auto& s : params) {
          const auto w = c.point(s);
          const auto a = embed_right(n, embed_left(w, ell));
          const auto b = embed_left(embed_right(n, w), ell);
          if (a != b) R.report.fail("double-degeneration square does not commute for l=" + std::to_string(ell));
          if (!conic_contains(t, a)) R.report.fail("double-degeneration image is not in the total space");
        }
    }
  return R;
}

// ---- horn filling ----

namespace {

bool outer_set(int s, int n) { return s == 0 || s == n; }

// Internal edge positions of edges from interior sets.
std::vector<int> interior_edges(const Arc& a, int n) {
  std::vector<int> out;
  for (int i = 0; i < a.internal_edges(); ++i)
    if (!outer_set(a.edges[i + 1].set, n)) out.push_back(i);
  return out;
}

int outer_edges(const Arc& a, int n) { return a.internal_edges() - static_cast<int>(interior_edges(a, n).size()); }

// Cube coordinate → (internal edge position, or -1) / free index
struct Coordinates {
  std::vector<int> edge;        // positions, coordinates 0..edge.size()-1
  std::vector<int> free_index;  // the remaining coordinates
  int size() const { return static_cast<int>(edge.size() + free_index.size()); }
};

Coordinates coordinates(const Arc& a, int n, int k) {
  Coordinates c;
  c.edge = interior_edges(a, n);
  const LabelSet fr = free_indices(a) & ~(LabelSet{1} << k);
  for (int i = 0; i < 32; ++i)
    if (fr >> i & 1) c.free_index.push_back(i);
  return c;
}

}  // namespace

Block horn_block(const Arc& a, int n, int k) {
  if (n < 1 || k <= 0 || k >= n) throw Error("horn_block: need 0 < k < n");
  Block b;
  b.eps = (free_indices(a) >> k) & 1;
  b.d = coordinates(a, n, k).size();
  return b;
}

namespace {

struct HornContext {
  const ArcCategory& C;
  const ArcCategoryData& D;
  int n, k;

  std::optional<int> find(const Arc& a) const {
    auto it = D.index.find(a);
    if (it == D.index.end()) return std::nullopt;
    return it->second;
  }

  // Stratum label of the open face (zero coordinates, hyper) of L_β.
  Arc label(const Arc& beta, std::uint32_t zero_edges, LabelSet zero_free, bool hyper) const {
    std::uint32_t collapsed = 0;
    for (int i : interior_edges(beta, n))
      if (!(zero_edges >> i & 1)) collapsed |= 1u << i;
    const LabelSet kbit = LabelSet{1} << k;
    const LabelSet fr = free_indices(beta);
    LabelSet added = fr & ~kbit & ~zero_free;
    if (!hyper) added |= fr & kbit;
    Arc out = apply_arrow(beta, {collapsed, added});
    if (hyper)
      for (auto& v : out.vertices) v.label &= ~kbit;
    return out;
  }
};

std::string fmt(const ArcCategory& C, const Arc& a) { return format_arc(C.sequence, a); }

}  // namespace

HornFillReport horn_fill_strata(const ArcCategory& C, int k, int max_codim,
                                const std::function<bool(const Arc&)>& nonempty) {
  const int n = C.sequence.n();
  if (n < 2 || k <= 0 || k >= n) throw Error("horn_fill_strata: need n >= 2 and 0 < k < n");
  if (C.source.set != 0 || C.target.set != n)
    throw Error("horn_fill_strata: source must lie in the first set and target in the last");
  if (max_codim < 1) throw Error("horn_fill_strata: max_codim must be at least 1");
  HornFillReport R;
  R.full = build_arc_category(C, max_codim);
  const auto& D = R.full;
  const HornContext H{C, D, n, k};
  const int N = static_cast<int>(D.arcs.size());
  auto present = [&](const Arc& a) { return !nonempty || nonempty(a); };

  // pieces: open faces of L_β away from the glued facets
  std::vector<std::vector<int>> pieces_of(N);
  std::vector<bool> is_horn(N, false);
  for (int b = 0; b < N; ++b) {
    const Arc& beta = D.arcs[b];
    if (!horn_membership(beta, n, k)) continue;
    is_horn[b] = true;
    R.horn_objects.push_back(b);
    if (!present(beta)) continue;
    const Block blk = horn_block(beta, n, k);
    const LBlock L{blk.d, blk.eps, default_epsilon()};
    if (blk.d + blk.eps != codim(beta) - outer_edges(beta, n))
      R.report.fail("block of " + fmt(C, beta) + " does not account for its codimension");
    const Coordinates co = coordinates(beta, n, k);
    for (std::uint32_t Z = 0; Z < (1u << blk.d); ++Z)
      for (int hyper = 0; hyper <= 1; ++hyper) {
        auto w = face_witness(L, LFace{Z, 0, false, hyper == 1});
        if (!w) continue;
        HornPiece P;
        P.arc = b;
        P.block = blk;
        P.hyper = hyper == 1;
        P.witness = std::move(*w);
        for (int j = 0; j < co.size(); ++j) {
          if (!(Z >> j & 1)) continue;
          if (j < static_cast<int>(co.edge.size())) {
            P.zero_edges |= 1u << co.edge[j];
          } else {
            P.zero_free |= LabelSet{1} << co.free_index[j - co.edge.size()];
          }
        }
        const Arc lab = H.label(beta, P.zero_edges, P.zero_free, P.hyper);
        const auto li = H.find(lab);
        if (!li) {
          R.report.fail("face of " + fmt(C, beta) + " is labelled by " + fmt(C, lab) + ", not in the category");
          continue;
        }
        P.label = *li;
        const int want = std::popcount(Z) + hyper + outer_edges(beta, n);
        if (codim(lab) != want)
          R.report.fail("face of " + fmt(C, beta) + " labelled " + fmt(C, lab) + " has codim " +
                        std::to_string(want) + " but the label has " + std::to_string(codim(lab)));
        pieces_of[b].push_back(static_cast<int>(R.pieces.size()));
        R.pieces.push_back(std::move(P));
      }

    // facet classification
    for (const auto& f : lblock_facets(blk.d, blk.eps)) {
      HornFacet hf;
      hf.arc = b;
      hf.facet = f;
      switch (f.kind) {
        case LFacetKind::Zero: {
          hf.role = FacetRole::Boundary;
          std::uint32_t ze = 0;
          LabelSet zf = 0;
          if (f.coord < static_cast<int>(co.edge.size())) {
            ze = 1u << co.edge[f.coord];
          } else {
            zf = LabelSet{1} << co.free_index[f.coord - co.edge.size()];
          }
          if (auto p = H.find(H.label(beta, ze, zf, false))) hf.partner = *p;
          break;
        }
        case LFacetKind::One:
        case LFacetKind::YOne: {
          hf.role = FacetRole::InteriorGlue;
          ArcArrow g;
          if (f.kind == LFacetKind::YOne) {
            g.added = LabelSet{1} << k;
          } else if (f.coord < static_cast<int>(co.edge.size())) {
            g.collapsed = 1u << co.edge[f.coord];
          } else {
            g.added = LabelSet{1} << co.free_index[f.coord - co.edge.size()];
          }
          const Arc partner = apply_arrow(beta, g);
          const auto pi = H.find(partner);
          if (!pi) {
            R.report.fail("gluing partner " + fmt(C, partner) + " of " + fmt(C, beta) + " is missing");
            break;
          }
          if (horn_membership(partner, n, k)) {
            hf.partner = *pi;
            const Block pb = horn_block(partner, n, k);
            if (pb.d != f.target_d || pb.eps != f.target_flag)
              R.report.fail("facet " + f.tag + " of " + fmt(C, beta) + " is glued to " + fmt(C, partner) +
                            " whose block is " + block_name(pb.d, pb.eps));
          } else if (f.nonempty) {
            R.report.fail("facet " + f.tag + " of " + fmt(C, beta) + " has no gluing partner in the horn");
          }
          break;
        }
        case LFacetKind::Hypersurface: {
          hf.role = FacetRole::MissingFacet;
          const Arc lab = H.label(beta, 0, 0, true);
          if (auto p = H.find(lab)) {
            hf.partner = *p;
            if (horn_membership(lab, n, k))
              R.report.fail("hypersurface of " + fmt(C, beta) + " lands on horn object " + fmt(C, lab));
          }
          break;
        }
      }
      R.facets.push_back(hf);
    }
  }

  // Glued arrows: (source label, target label, arrow data relative to the
  // target). Within a block, a face meets the faces in its closure; along
  // β → β' of the horn, L_β × Y_β' lies in both blocks and the arrow
  // collapses the outer edges that β' has and β lacks.
  using Triple = std::tuple<int, int, ArcArrow>;
  std::set<Triple> arrows;
  auto add_arrow = [&](int src, int tgt, const ArcArrow& f, const std::string& where) {
    if (!(apply_arrow(D.arcs[tgt], f) == D.arcs[src])) {
      R.report.fail(where + ": " + fmt(C, D.arcs[tgt]) + " does not collapse to " + fmt(C, D.arcs[src]));
      return;
    }
    arrows.insert({src, tgt, f});
  };
  // position of each internal edge of β inside the label that keeps `keep`
  auto positions = [&](const Arc& beta, std::uint32_t keep_interior) {
    std::vector<int> pos(beta.internal_edges(), -1);
    int next = 0;
    for (int i = 0; i < beta.internal_edges(); ++i)
      if (outer_set(beta.edges[i + 1].set, n) || (keep_interior >> i & 1)) pos[i] = next++;
    return pos;
  };
  const LabelSet kbit = LabelSet{1} << k;
  for (int b = 0; b < N; ++b)
    for (int i : pieces_of[b])
      for (int j : pieces_of[b]) {
        const auto &P = R.pieces[i], &Q = R.pieces[j];
        if ((P.zero_edges & ~Q.zero_edges) || (P.zero_free & ~Q.zero_free) || P.hyper > Q.hyper) continue;
        const auto pos = positions(D.arcs[b], Q.zero_edges);
        ArcArrow f;
        for (int e = 0; e < 32; ++e)
          if ((Q.zero_edges & ~P.zero_edges) >> e & 1) f.collapsed |= 1u << pos[e];
        f.added = (Q.zero_free & ~P.zero_free) | (Q.hyper && !P.hyper ? kbit : 0);
        add_arrow(P.label, Q.label, f, "face closure in " + fmt(C, D.arcs[b]));
      }
  for (int a = 0; a < D.category.arrow_count(); ++a) {
    const auto& arr = D.category.arrow(a);
    const int src = arr.source, tgt = arr.target;
    if (src == tgt || !is_horn[src] || !is_horn[tgt]) continue;
    if (pieces_of[src].empty() || pieces_of[tgt].empty()) continue;
    const ArcArrow& g = D.arrows[a].second;
    const Arc& target = D.arcs[tgt];
    std::vector<int> kept;  // target positions of the source's internal edges
    std::uint32_t outer_collapsed = 0;
    for (int i = 0; i < target.internal_edges(); ++i) {
      if (!(g.collapsed >> i & 1)) {
        kept.push_back(i);
      } else if (outer_set(target.edges[i + 1].set, n)) {
        outer_collapsed |= 1u << i;
      }
    }
    for (int i : pieces_of[src]) {
      const auto& P = R.pieces[i];
      std::uint32_t ze = 0;
      for (int e = 0; e < 32; ++e)
        if (P.zero_edges >> e & 1) ze |= 1u << kept.at(e);
      int match = -1;
      for (int j : pieces_of[tgt]) {
        const auto& Q = R.pieces[j];
        if (Q.zero_edges == ze && Q.zero_free == P.zero_free && Q.hyper == P.hyper) match = j;
      }
      if (match < 0) {
        R.report.fail("face of " + fmt(C, D.arcs[src]) + " has no image in the block of " + fmt(C, target));
        continue;
      }
      const auto& Q = R.pieces[match];
      if (!outer_collapsed) {
        if (Q.label != P.label)
          R.report.fail("gluing along " + fmt(C, D.arcs[src]) + " -> " + fmt(C, target) + " changes the label " +
                        fmt(C, D.arcs[P.label]) + " to " + fmt(C, D.arcs[Q.label]));
        continue;
      }
      const auto pos = positions(target, Q.zero_edges);
      ArcArrow f;
      for (int e = 0; e < 32; ++e)
        if (outer_collapsed >> e & 1) f.collapsed |= 1u << pos[e];
      add_arrow(P.label, Q.label, f, "transport along " + fmt(C, D.arcs[src]) + " -> " + fmt(C, target));
    }
  }

  // labels of codim max_codim may need blocks beyond the enumeration
  auto in_range = [&](int i) { return codim(D.arcs[i]) < max_codim; };
  std::set<int> realized;
  for (const auto& P : R.pieces)
    if (P.label >= 0 && in_range(P.label)) realized.insert(P.label);
  for (auto it = arrows.begin(); it != arrows.end();)
    it = in_range(std::get<0>(*it)) && in_range(std::get<1>(*it)) ? std::next(it) : arrows.erase(it);
  R.strata.assign(realized.begin(), realized.end());
  const int S = static_cast<int>(R.strata.size());
  for (int s : R.strata) arrows.insert({s, s, ArcArrow{}});
  // close under composition
  for (bool grew = true; grew;) {
    grew = false;
    std::map<int, std::vector<std::pair<int, ArcArrow>>> out_of;
    for (const auto& [s, t, f] : arrows) out_of[s].push_back({t, f});
    std::vector<Triple> fresh;
    for (const auto& [s, t, f] : arrows)
      for (const auto& [u, g] : out_of[t]) {
        Triple c{s, u, compose_arrows(D.arcs[u], g, f)};
        if (!arrows.count(c)) fresh.push_back(c);
      }
    for (auto& c : fresh) grew |= arrows.insert(c).second;
  }

  // glued category
  {
    CornerCategory& G = R.glued;
    std::unordered_map<int, int> obj;
    for (int i = 0; i < S; ++i) obj[R.strata[i]] = G.add_object(fmt(C, D.arcs[R.strata[i]]), codim(D.arcs[R.strata[i]]));
    std::map<Triple, int> id_of;
    for (const auto& tr : arrows) {
      const auto& [s, t, f] = tr;
      if (s == t) {
        if (!(f == ArcArrow{})) R.report.fail("closure produced a non-identity endomorphism of " + G.object_id(obj[s]));
        id_of[tr] = G.identity(obj[s]);
        continue;
      }
      std::ostringstream name;
      name << G.object_id(obj[s]) << " -> " << G.object_id(obj[t]) << " [" << f.collapsed << "," << f.added << "]";
      id_of[tr] = G.add_arrow(name.str(), obj[s], obj[t]);
    }
    for (const auto& [f, fi] : id_of)
      for (const auto& [g, gi] : id_of) {
        if (std::get<1>(f) != std::get<0>(g)) continue;
        if (std::get<0>(f) == std::get<1>(f) || std::get<0>(g) == std::get<1>(g)) continue;
        const Triple c{std::get<0>(f), std::get<1>(g), compose_arrows(D.arcs[std::get<1>(g)], std::get<2>(g), std::get<2>(f))};
        G.set_composite(fi, gi, id_of.at(c));
      }
    const auto cr = is_corner_model(G);
    R.corner_ok = cr.ok;
    if (!cr.ok) R.report.fail("glued stratification is not a corner model: " + cr.first_violation);
  }

  // label bijection with the full category (objects with nonempty payload),
  // arrows matched by their collapse data
  {
    std::set<int> expected;
    for (int i = 0; i < N; ++i)
      if (present(D.arcs[i]) && in_range(i)) expected.insert(i);
    bool ok = expected == realized;
    for (int i : expected)
      if (!realized.count(i)) R.report.fail("object " + fmt(C, D.arcs[i]) + " is not a stratum of the filler");
    for (int i : realized)
      if (!expected.count(i)) R.report.fail("stratum " + fmt(C, D.arcs[i]) + " is not expected");
    std::set<Triple> full_arrows;
    for (int a = 0; a < D.category.arrow_count(); ++a) {
      const int s = D.category.arrow(a).source, t = D.category.arrow(a).target;
      if (expected.count(s) && expected.count(t)) full_arrows.insert({s, t, D.arrows[a].second});
    }
    for (const auto& tr : full_arrows)
      if (!arrows.count(tr)) {
        ok = false;
        R.report.fail("arrow " + fmt(C, D.arcs[std::get<0>(tr)]) + " -> " + fmt(C, D.arcs[std::get<1>(tr)]) +
                      " is missing from the filler");
      }
    for (const auto& tr : arrows)
      if (!full_arrows.count(tr)) {
        ok = false;
        R.report.fail("glued arrow " + fmt(C, D.arcs[std::get<0>(tr)]) + " -> " + fmt(C, D.arcs[std::get<1>(tr)]) +
                      " is not an arrow of the full category");
      }
    R.bijection_ok = ok;
  }
  R.report.note(std::to_string(R.horn_objects.size()) + " horn objects, " + std::to_string(R.pieces.size()) +
                " pieces, " + std::to_string(S) + " strata");
  return R;
}

HornFillTwo horn_fill_two(const FlowBimodule& B01, const FlowBimodule& B12) {
  if (B01.n() != 1 || B12.n() != 1) throw Error("horn_fill_two expects two bimodules");
  if (!(B01.gamma == B12.gamma)) throw Error("horn_fill_two: energy monoids differ");
  const FlowCategory mid = endpoint(B01, 1);
  {
    const FlowCategory other = endpoint(B12, 0);
    if (!(mid.sets == other.sets) || !(mid.cell(1) == other.cell(1)))
      throw Error("horn_fill_two: the horn edges do not share their middle category");
  }
  auto check_rank = [](const std::vector<Component>& cs) {
    for (const auto& c : cs)
      for (const auto& f : c.facets)
        for (const auto& e : f.entries)
          if (e.added_rank != 0)
            throw Error("horn filling: structure map into " + c.id +
                        " adds obstruction rank; this needs the stabilization step, which is not supported");
  };
  check_rank(B01.cell(3));
  check_rank(B12.cell(3));
  check_rank(mid.cell(1));

  const auto& A = B01.cell(3);
  const auto& B = B12.cell(3);
  const auto& Y = mid.cell(1);
  HornFillTwo out;

  // L_{1,0} pieces: hypersurface point × Y(p,q) × Y(q,r)
  std::vector<std::pair<int, int>> prods;
  std::map<std::pair<int, int>, int> prod_index;
  for (int i = 0; i < static_cast<int>(A.size()); ++i)
    for (int j = 0; j < static_cast<int>(B.size()); ++j) {
      if (A[i].target != B[j].source) continue;
      if (A[i].vdim() + B[j].vdim() > 1) continue;
      prod_index[{i, j}] = static_cast<int>(prods.size());
      prods.push_back({i, j});
    }

  // owners of broken configurations: (a0, y) in right breaks of B01,
  // (y, b0) in left breaks of B12
  std::map<std::pair<std::string, std::string>, int> owner_a, owner_b;
  for (int i = 0; i < static_cast<int>(A.size()); ++i) {
    if (A[i].vdim() != 1) continue;
    for (const auto& f : A[i].facets)
      if (f.kind == FacetKind::Break && f.vertex == 1)
        for (const auto& e : f.entries) owner_a[{e.parts.at(0), e.parts.at(1)}] = i;
  }
  for (int j = 0; j < static_cast<int>(B.size()); ++j) {
    if (B[j].vdim() != 1) continue;
    for (const auto& f : B[j].facets)
      if (f.kind == FacetKind::Break && f.vertex == 0)
        for (const auto& e : f.entries) owner_b[{e.parts.at(0), e.parts.at(1)}] = j;
  }

  std::vector<int> parent(prods.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  // L_{2,0} pieces: hypersurface arc × Y(p,q) × Y(q,q') × Y(q',r), all points.
  // Its ends x_1 = 1 and x_2 = 1 sit in the L_{1,0} pieces over p–q'–r and p–q–r.
  long unpaired = 0;
  for (int i = 0; i < static_cast<int>(A.size()); ++i) {
    if (A[i].vdim() != 0) continue;
    for (const auto& y : Y) {
      if (y.vdim() != 0 || y.source != A[i].target) continue;
      for (int j = 0; j < static_cast<int>(B.size()); ++j) {
        if (B[j].vdim() != 0 || B[j].source != y.target) continue;
        auto oa = owner_a.find({A[i].id, y.id});
        auto ob = owner_b.find({y.id, B[j].id});
        if (oa == owner_a.end() || ob == owner_b.end()) {
          ++unpaired;
          continue;
        }
        const int u = prod_index.at({oa->second, j}), v = prod_index.at({i, ob->second});
        const int ru = find(u), rv = find(v);
        if (ru != rv) parent[std::max(ru, rv)] = std::min(ru, rv);
      }
    }
  }
  if (unpaired) out.notes.push_back(std::to_string(unpaired) + " hypersurface arcs with an unmatched end");

  std::map<int, std::vector<int>> classes;
  for (int i = 0; i < static_cast<int>(prods.size()); ++i) classes[find(i)].push_back(i);
  std::map<std::pair<std::string, std::string>, int> serial;
  for (const auto& [root, members] : classes) {
    const auto& a = A[prods[members.front()].first];
    const auto& b = B[prods[members.front()].second];
    FilledComponent fc;
    fc.source = a.source;
    fc.target = b.target;
    fc.energy = a.energy + b.energy;
    fc.vdim = a.vdim() + b.vdim();
    for (int m : members) {
      const auto& am = A[prods[m].first];
      const auto& bm = B[prods[m].second];
      if (am.energy + bm.energy != fc.energy || am.vdim() + bm.vdim() != fc.vdim)
        throw CheckFailure("horn filling glued pieces of different energy or dimension");
      fc.pieces.push_back({am.id, bm.id});
      if (fc.vdim == 0) fc.count += am.count * bm.count;
    }
    std::sort(fc.pieces.begin(), fc.pieces.end());
    fc.id = "H(" + fc.source + "," + fc.target + ")#" + std::to_string(serial[{fc.source, fc.target}]++);
    out.missing.push_back(std::move(fc));
  }

  out.chain_map = IntMatrix(static_cast<int>(B12.sets[1].size()), static_cast<int>(B01.sets[0].size()));
  for (const auto& fc : out.missing) {
    if (fc.vdim != 0) continue;
    const int r = *B12.object_index(1, fc.target), c = *B01.object_index(0, fc.source);
    out.chain_map(r, c) += fc.count;
  }
  return out;
}

nlohmann::json lfacet_to_json(const LFacet& f) {
  static const char* kinds[] = {"x=0", "x=1", "y=1", "hypersurface"};
  nlohmann::json j{{"kind", kinds[static_cast<int>(f.kind)]}, {"tag", f.tag}, {"nonempty", f.nonempty}};
  if (f.coord >= 0) j["coord"] = f.coord + 1;
  if (f.target_d >= 0) j["glued_to"] = {f.target_d, f.target_flag};
  return j;
}

namespace {

nlohmann::json tp1_json(const TP1& z) { return {format_rational(z.x), format_rational(z.y)}; }

}  // namespace

nlohmann::json conic_component_to_json(const ConicComponent& c) {
  nlohmann::json j;
  j["index"] = c.index;
  j["bijective_factors"] = nlohmann::json::array();
  for (int i = c.window_lo; i <= c.window_hi; ++i) j["bijective_factors"].push_back(i);
  j["constant_factors"] = nlohmann::json::array();
  for (std::size_t i = 0; i < c.constant_factors.size(); ++i)
    j["constant_factors"].push_back({{"factor", c.constant_factors[i]}, {"value", tp1_json(c.constants[i])}});
  j["scale"] = nlohmann::json::array();
  for (const auto& s : c.scale) j["scale"].push_back(format_rational(s));
  j["ends"] = {nlohmann::json::array(), nlohmann::json::array()};
  for (const auto& z : c.point(Rational(0))) j["ends"][0].push_back(tp1_json(z));
  for (const auto& z : c.point(std::nullopt)) j["ends"][1].push_back(tp1_json(z));
  return j;
}

nlohmann::json horn_fill_to_json(const ArcCategory& C, const HornFillReport& r) {
  static const char* roles[] = {"boundary", "missing-facet", "interior-glue"};
  const auto& D = r.full;
  nlohmann::json j;
  j["ok"] = r.report.ok;
  j["corner_model"] = r.corner_ok;
  j["label_bijection"] = r.bijection_ok;
  j["violations"] = r.report.violations;
  j["notes"] = r.report.notes;
  j["horn_objects"] = nlohmann::json::array();
  for (int b : r.horn_objects) j["horn_objects"].push_back(fmt(C, D.arcs[b]));
  j["strata"] = nlohmann::json::array();
  for (int s : r.strata) j["strata"].push_back({{"arc", fmt(C, D.arcs[s])}, {"codim", codim(D.arcs[s])}});
  j["facets"] = nlohmann::json::array();
  for (const auto& f : r.facets) {
    nlohmann::json e{{"arc", fmt(C, D.arcs[f.arc])}, {"facet", lfacet_to_json(f.facet)}, {"role", roles[static_cast<int>(f.role)]}};
    if (f.partner >= 0) e["partner"] = fmt(C, D.arcs[f.partner]);
    j["facets"].push_back(e);
  }
  j["pieces"] = nlohmann::json::array();
  for (const auto& p : r.pieces) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& c : p.witness) w.push_back(format_rational(c));
    j["pieces"].push_back({{"arc", fmt(C, D.arcs[p.arc])},
                           {"block", {p.block.d, p.block.eps}},
                           {"hypersurface", p.hyper},
                           {"label", p.label >= 0 ? fmt(C, D.arcs[p.label]) : std::string()},
                           {"witness", w}});
  }
  return j;
}

nlohmann::json horn_fill_two_to_json(const HornFillTwo& h) {
  nlohmann::json j;
  j["missing_facet"] = nlohmann::json::array();
  for (const auto& c : h.missing) {
    nlohmann::json p = nlohmann::json::array();
    for (const auto& [a, b] : c.pieces) p.push_back({a, b});
    nlohmann::json e{{"id", c.id},         {"source", c.source}, {"target", c.target},
                     {"energy", format_rational(c.energy)}, {"vdim", c.vdim},     {"pieces", p}};
    if (c.vdim == 0) e["count"] = format_bigint(c.count);
    j["missing_facet"].push_back(e);
  }
  j["chain_map"] = nlohmann::json::array();
  for (int r = 0; r < h.chain_map.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < h.chain_map.cols(); ++c) row.push_back(format_bigint(h.chain_map(r, c)));
    j["chain_map"].push_back(row);
  }
  j["notes"] = h.notes;
  return j;
}

std::string horn_fill_to_dot(const HornFillReport& r) { return corner_to_dot(r.glued); }

}  // namespace flowcat
