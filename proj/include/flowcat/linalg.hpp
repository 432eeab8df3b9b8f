#ifndef FLOWCAT_LINALG_HPP
#define FLOWCAT_LINALG_HPP

#include "flowcat/numeric.hpp"

#include <string>
#include <vector>

namespace flowcat {

enum class Ring { Z, Z2 };

std::string ring_name(Ring r);
Ring ring_from_name(const std::string& s);

// Dense integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

  static IntMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  BigInt& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const BigInt& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  bool is_zero() const;
  IntMatrix transpose() const;
  IntMatrix mod2() const;
  IntMatrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const;

  bool operator==(const IntMatrix& o) const = default;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<BigInt> a_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a);

std::string format_matrix(const IntMatrix& m);
std::string matrix_to_csv(const IntMatrix& m);

// Nonzero invariant factors d₁ | d₂ | … (positive), via pivots of least
// absolute value.
std::vector<BigInt> smith_invariants(IntMatrix m);
int rank_z(const IntMatrix& m);
int rank_f2(const IntMatrix& m);

// Rows of the result form a basis of the integer kernel {x : m x = 0}.
IntMatrix kernel_basis_z(const IntMatrix& m);
// Same over ℤ/2 (entries 0/1).
IntMatrix kernel_basis_f2(const IntMatrix& m);

// Row-style Hermite normal form of the lattice spanned by the rows of m,
// zero rows dropped. Two generator sets span the same lattice iff their
// forms are equal.
IntMatrix hermite_rows(const IntMatrix& m);
// Reduced row echelon form over ℤ/2, zero rows dropped.
IntMatrix rref_f2(const IntMatrix& m);

// Stack generator rows.
IntMatrix vstack(const IntMatrix& a, const IntMatrix& b);

}  // namespace flowcat

#endif
