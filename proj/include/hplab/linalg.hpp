// Nullspaces of dense systems: fraction-free elimination over the integers
// (exact regime) and column-pivoted Householder QR (BigComplex regime).
#pragma once

#include "hplab/scalar.hpp"

#include <vector>

namespace hplab {

// Kernels with an OpenMP variant keep a serial reference; both must produce
// identical results.
enum class Exec { Serial, Parallel };

struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Integer> a;  // row-major
  Integer& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Integer& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

// Clears denominators row by row and divides out each row's content.
IntMatrix integer_rows(const std::vector<std::vector<Rational>>& rows, int cols);

// In-place Bareiss reduction to row echelon form. Returns the pivot column of
// each of the first rank rows. Entries of the reduced rows are minors of the
// input, so every division is exact.
std::vector<int> bareiss_echelon(IntMatrix& m, Exec exec = Exec::Serial);

// Basis of {x : rows * x = 0}, each vector primitive over Z with its first
// nonzero entry positive. Basis order follows the free columns left to right.
std::vector<std::vector<Rational>> nullspace_exact(const std::vector<std::vector<Rational>>& rows, int cols,
                                                   Exec exec = Exec::Serial);

struct FloatNullspace {
  std::vector<std::vector<BigComplex>> basis;  // unit 2-norm vectors
  int rank = 0;
  BigFloat smallest_kept_pivot;     // |R_rr| of the last pivot inside the rank
  BigFloat largest_dropped_pivot;   // column norm that fell below tolerance
};

// Rank decided by |R_kk| <= rel_tol * |R_00|.
FloatNullspace nullspace_float(const std::vector<std::vector<BigComplex>>& rows, int cols, const BigFloat& rel_tol);

}  // namespace hplab
