#include "flowcat/linalg.hpp"

#include "flowcat/error.hpp"

#include <algorithm>
#include <sstream>

namespace flowcat {

std::string ring_name(Ring r) { return r == Ring::Z ? "Z" : "Z2"; }

Ring ring_from_name(const std::string& s) {
  if (s == "Z" || s == "z") return Ring::Z;
  if (s == "Z2" || s == "z2" || s == "Z/2") return Ring::Z2;
  throw Error("unknown ring '" + s + "' (expected Z or Z2)");
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool IntMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const BigInt& x) { return x == 0; });
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::mod2() const {
  IntMatrix t(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(i, j) = ((*this)(i, j) % 2 != 0) ? 1 : 0;
  return t;
}

IntMatrix IntMatrix::submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const {
  IntMatrix s(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(static_cast<int>(i), static_cast<int>(j)) = (*this)(rows[i], cols[j]);
  return s;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw Error("matrix product: dimension mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (int j = 0; j < b.cols(); ++j)
        if (b(k, j) != 0) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("matrix sum: dimension mismatch");
  IntMatrix c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

IntMatrix operator-(const IntMatrix& a) {
  IntMatrix c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = -c(i, j);
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) { return a + (-b); }

std::string format_matrix(const IntMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < m.rows(); ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
  }
  os << "]";
  return os.str();
}

std::string matrix_to_csv(const IntMatrix& m) {
  std::ostringstream os;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
    os << "\n";
  }
  return os.str();
}

IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  if (a.cols() != b.cols()) throw Error("vstack: column mismatch");
  IntMatrix c(a.rows() + b.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) c(a.rows() + i, j) = b(i, j);
  return c;
}

namespace {

BigInt abs_big(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

// floor division keeping remainders in [0, |b|)
BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  BigInt r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) q -= 1;
  return q;
}

void swap_rows(IntMatrix& m, int a, int b) {
  if (a == b) return;
  for (int j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(IntMatrix& m, int a, int b) {
  if (a == b) return;
  for (int i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row r -= q * row p, from column `from`
void row_axpy(IntMatrix& m, int r, int p, const BigInt& q, int from = 0) {
  if (q == 0) return;
  for (int j = from; j < m.cols(); ++j)
    if (m(p, j) != 0) m(r, j) -= q * m(p, j);
}

void col_axpy(IntMatrix& m, int c, int p, const BigInt& q) {
  if (q == 0) return;
  for (int i = 0; i < m.rows(); ++i)
    if (m(i, p) != 0) m(i, c) -= q * m(i, p);
}

// Unimodular row reduction to echelon form on columns [0, limit).
// Returns the number of pivot rows; if `reduce_above`, entries above each
// pivot are reduced into [0, pivot).
int echelon_rows(IntMatrix& m, int limit, bool reduce_above) {
  int row = 0;
  for (int c = 0; c < limit && row < m.rows(); ++c) {
    while (true) {
      int best = -1;
      for (int i = row; i < m.rows(); ++i)
        if (m(i, c) != 0 && (best < 0 || abs_big(m(i, c)) < abs_big(m(best, c)))) best = i;
      if (best < 0) break;
      swap_rows(m, row, best);
      bool done = true;
      for (int i = row + 1; i < m.rows(); ++i) {
        if (m(i, c) == 0) continue;
        row_axpy(m, i, row, m(i, c) / m(row, c), c);
        if (m(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (m(row, c) == 0) continue;
    if (m(row, c) < 0)
      for (int j = c; j < m.cols(); ++j) m(row, j) = -m(row, j);
    if (reduce_above)
      for (int i = 0; i < row; ++i) row_axpy(m, i, row, floor_div(m(i, c), m(row, c)), c);
    ++row;
  }
  return row;
}

using F2Rows = std::vector<std::vector<std::uint8_t>>;

F2Rows to_f2(const IntMatrix& m) {
  F2Rows r(m.rows(), std::vector<std::uint8_t>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r[i][j] = (m(i, j) % 2 != 0) ? 1 : 0;
  return r;
}

// In-place RREF; returns pivot columns.
std::vector<int> rref_in_place(F2Rows& a, int cols) {
  std::vector<int> pivots;
  int row = 0;
  for (int c = 0; c < cols && row < static_cast<int>(a.size()); ++c) {
    int p = -1;
    for (int i = row; i < static_cast<int>(a.size()); ++i)
      if (a[i][c]) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[row], a[p]);
    for (int i = 0; i < static_cast<int>(a.size()); ++i)
      if (i != row && a[i][c])
        for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] ^= a[row][j];
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace

std::vector<BigInt> smith_invariants(IntMatrix m) {
  std::vector<BigInt> out;
  const int R = m.rows(), C = m.cols();
  for (int t = 0; t < std::min(R, C); ++t) {
    while (true) {
      int bi = -1, bj = -1;
      for (int i = t; i < R; ++i)
        for (int j = t; j < C; ++j)
          if (m(i, j) != 0 && (bi < 0 || abs_big(m(i, j)) < abs_big(m(bi, bj)))) {
            bi = i;
            bj = j;
          }
      if (bi < 0) return out;
      swap_rows(m, t, bi);
      swap_cols(m, t, bj);
      bool clean = true;
      for (int i = t + 1; i < R; ++i)
        if (m(i, t) != 0) {
          row_axpy(m, i, t, m(i, t) / m(t, t), t);
          if (m(i, t) != 0) clean = false;
        }
      for (int j = t + 1; j < C; ++j)
        if (m(t, j) != 0) {
          col_axpy(m, j, t, m(t, j) / m(t, t));
          if (m(t, j) != 0) clean = false;
        }
      if (!clean) continue;
      // divisibility of the rest
      int bad = -1;
      for (int i = t + 1; i < R && bad < 0; ++i)
        for (int j = t + 1; j < C; ++j)
          if (m(i, j) % m(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      for (int j = t; j < C; ++j) m(t, j) += m(bad, j);
    }
    out.push_back(abs_big(m(t, t)));
  }
  return out;
}

int rank_z(const IntMatrix& m) {
  IntMatrix a = m;
  return echelon_rows(a, a.cols(), false);
}

int rank_f2(const IntMatrix& m) {
  F2Rows a = to_f2(m);
  return static_cast<int>(rref_in_place(a, m.cols()).size());
}

IntMatrix kernel_basis_z(const IntMatrix& m) {
  const int r = m.rows(), c = m.cols();
  IntMatrix aug(c, r + c);
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < r; ++j) aug(i, j) = m(j, i);
    aug(i, r + i) = 1;
  }
  const int rank = echelon_rows(aug, r, false);
  IntMatrix k(c - rank, c);
  for (int i = rank; i < c; ++i)
    for (int j = 0; j < c; ++j) k(i - rank, j) = aug(i, r + j);
  return hermite_rows(k);
}

IntMatrix kernel_basis_f2(const IntMatrix& m) {
  const int c = m.cols();
  F2Rows a = to_f2(m);
  auto pivots = rref_in_place(a, c);
  std::vector<bool> is_pivot(c, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<int> free_cols;
  for (int j = 0; j < c; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  IntMatrix k(static_cast<int>(free_cols.size()), c);
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    k(static_cast<int>(f), free_cols[f]) = 1;
    for (std::size_t p = 0; p < pivots.size(); ++p)
      if (a[p][free_cols[f]]) k(static_cast<int>(f), pivots[p]) = 1;
  }
  return k;
}

IntMatrix hermite_rows(const IntMatrix& m) {
  IntMatrix a = m;
  const int rank = echelon_rows(a, a.cols(), true);
  IntMatrix h(rank, a.cols());
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < a.cols(); ++j) h(i, j) = a(i, j);
  return h;
}

IntMatrix rref_f2(const IntMatrix& m) {
  F2Rows a = to_f2(m);
  auto pivots = rref_in_place(a, m.cols());
  IntMatrix h(static_cast<int>(pivots.size()), m.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i)
    for (int j = 0; j < m.cols(); ++j) h(static_cast<int>(i), j) = a[i][j];
  return h;
}

}  // namespace flowcat
