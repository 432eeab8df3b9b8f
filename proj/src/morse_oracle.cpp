// Reference homology of a simplicial complex. Deliberately shares no
// reduction code with linalg: pivots are the first nonzero entry and
// elimination uses Bezout row/column operations.
#include "flowcat/morse.hpp"

#include <algorithm>

namespace flowcat {

namespace {

using Dense = std::vector<std::vector<BigInt>>;

void bezout(const BigInt& a, const BigInt& b, BigInt& x, BigInt& y, BigInt& g) {
  BigInt old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const BigInt q = old_r / r;
    BigInt tmp = r;
    r = old_r - q * r;
    old_r = tmp;
    tmp = s;
    s = old_s - q * s;
    old_s = tmp;
    tmp = t;
    t = old_t - q * t;
    old_t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  g = old_r;
  x = old_s;
  y = old_t;
}

// Diagonal of a Smith form of m (absolute values, zeros dropped).
std::vector<BigInt> smith_diagonal(Dense m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  std::vector<BigInt> diag;
  for (int t = 0; t < std::min(rows, cols); ++t) {
    int pi = -1, pj = -1;
    for (int j = t; j < cols && pi < 0; ++j)
      for (int i = t; i < rows; ++i)
        if (m[i][j] != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi < 0) break;
    std::swap(m[t], m[pi]);
    for (auto& row : m) std::swap(row[t], row[pj]);
    for (;;) {
      bool dirty = false;
      for (int i = t + 1; i < rows; ++i) {
        if (m[i][t] == 0) continue;
        if (m[i][t] % m[t][t] == 0) {
          const BigInt q = m[i][t] / m[t][t];
          for (int j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
          continue;
        }
        BigInt x, y, g;
        bezout(m[t][t], m[i][t], x, y, g);
        const BigInt a = m[t][t] / g, b = m[i][t] / g;
        for (int j = t; j < cols; ++j) {
          const BigInt u = m[t][j], v = m[i][j];
          m[t][j] = x * u + y * v;
          m[i][j] = -b * u + a * v;
        }
      }
      for (int j = t + 1; j < cols; ++j) {
        if (m[t][j] == 0) continue;
        if (m[t][j] % m[t][t] == 0) {
          const BigInt q = m[t][j] / m[t][t];
          for (int i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
          continue;
        }
        BigInt x, y, g;
        bezout(m[t][t], m[t][j], x, y, g);
        const BigInt a = m[t][t] / g, b = m[t][j] / g;
        for (int i = t; i < rows; ++i) {
          const BigInt u = m[i][t], v = m[i][j];
          m[i][t] = x * u + y * v;
          m[i][j] = -b * u + a * v;
        }
        dirty = true;
      }
      if (dirty) continue;
      // divisibility: fold an offending row into row t
      int bad = -1;
      for (int i = t + 1; i < rows && bad < 0; ++i)
        for (int j = t + 1; j < cols; ++j)
          if (m[i][j] % m[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      for (int j = t; j < cols; ++j) m[t][j] += m[bad][j];
    }
    diag.push_back(m[t][t] < 0 ? BigInt(-m[t][t]) : m[t][t]);
  }
  return diag;
}

int rank_mod2(Dense m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  for (auto& row : m)
    for (auto& x : row) x = ((x % 2) + 2) % 2;
  int r = 0;
  for (int j = 0; j < cols && r < rows; ++j) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][j] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[r], m[p]);
    for (int i = 0; i < rows; ++i)
      if (i != r && m[i][j] != 0)
        for (int k = j; k < cols; ++k) m[i][k] = (m[i][k] + m[r][k]) % 2;
    ++r;
  }
  return r;
}

}  // namespace

HomologyResult simplicial_homology(const SimplicialComplex& K, Ring ring) {
  int top = -1;
  for (int c = 0; c < K.size(); ++c) top = std::max(top, K.dim(c));
  std::vector<std::vector<int>> by_dim(top + 2);
  std::vector<int> slot(K.size());
  for (int c = 0; c < K.size(); ++c) {
    slot[c] = static_cast<int>(by_dim[K.dim(c)].size());
    by_dim[K.dim(c)].push_back(c);
  }
  // ∂_k : C_k → C_{k-1}, rows indexed by (k-1)-cells.
  auto boundary = [&](int k) {
    Dense m;
    if (k <= 0 || k > top) return m;
    m.assign(by_dim[k - 1].size(), std::vector<BigInt>(by_dim[k].size(), 0));
    for (std::size_t j = 0; j < by_dim[k].size(); ++j)
      for (const auto& [f, s] : K.faces[by_dim[k][j]]) m[slot[f]][j] = s;
    return m;
  };
  std::vector<int> ranks(top + 2, 0);
  std::vector<std::vector<BigInt>> diag(top + 2);
  for (int k = 1; k <= top; ++k) {
    if (ring == Ring::Z) {
      diag[k] = smith_diagonal(boundary(k));
      ranks[k] = static_cast<int>(diag[k].size());
    } else {
      ranks[k] = rank_mod2(boundary(k));
    }
  }
  HomologyResult H;
  H.ring = ring;
  for (int k = 0; k <= top; ++k) {
    HomologyGroup g;
    g.rank = static_cast<int>(by_dim[k].size()) - ranks[k] - ranks[k + 1];
    if (ring == Ring::Z)
      for (const auto& x : diag[k + 1])
        if (x > 1) g.torsion.push_back(x);
    std::sort(g.torsion.begin(), g.torsion.end());
    if (g.rank != 0 || !g.torsion.empty()) H.groups[k] = g;
  }
  return H;
}

}  // namespace flowcat
