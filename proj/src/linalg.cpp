#include "hplab/linalg.hpp"

#include "hplab/errors.hpp"

#include <algorithm>
#include <utility>

namespace hplab {

IntMatrix integer_rows(const std::vector<std::vector<Rational>>& rows, int cols) {
  IntMatrix m;
  m.rows = static_cast<int>(rows.size());
  m.cols = cols;
  m.a.assign(static_cast<size_t>(m.rows) * cols, Integer(0));
  for (int i = 0; i < m.rows; ++i) {
    const auto& r = rows[static_cast<size_t>(i)];
    if (static_cast<int>(r.size()) != cols) throw InvalidArgument("integer_rows: ragged row");
    Integer l = 1;
    for (const auto& q : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
    Integer g = 0;
    for (int j = 0; j < cols; ++j) {
      const auto& q = r[static_cast<size_t>(j)];
      m(i, j) = q.get_num() * (l / q.get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m(i, j).get_mpz_t());
    }
    if (g > 1)
      for (int j = 0; j < cols; ++j) mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), g.get_mpz_t());
  }
  return m;
}

namespace {

// Row update below pivot (r, c) for one row i:
// m(i,j) <- (p * m(i,j) - m(i,c) * m(r,j)) / prev.
void bareiss_row(IntMatrix& m, int r, int c, int i, const Integer& prev) {
  const Integer& p = m(r, c);
  Integer f = m(i, c);
  Integer t;
  for (int j = c + 1; j < m.cols; ++j) {
    mpz_mul(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), p.get_mpz_t());
    mpz_mul(t.get_mpz_t(), f.get_mpz_t(), m(r, j).get_mpz_t());
    mpz_sub(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), t.get_mpz_t());
    if (prev != 1) mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
  }
  m(i, c) = 0;
}

}  // namespace

std::vector<int> bareiss_echelon(IntMatrix& m, Exec exec) {
  std::vector<int> pivots;
  Integer prev = 1;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int piv = -1;
    for (int i = r; i < m.rows; ++i) {
      if (sgn(m(i, c)) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(r, j));
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
      for (int i = r + 1; i < m.rows; ++i) bareiss_row(m, r, c, i, prev);
    } else {
      for (int i = r + 1; i < m.rows; ++i) bareiss_row(m, r, c, i, prev);
    }
    prev = m(r, c);
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::vector<std::vector<Rational>> nullspace_exact(const std::vector<std::vector<Rational>>& rows, int cols,
                                                   Exec exec) {
  IntMatrix m = integer_rows(rows, cols);
  std::vector<int> piv = bareiss_echelon(m, exec);
  std::vector<bool> is_pivot(static_cast<size_t>(cols), false);
  for (int c : piv) is_pivot[static_cast<size_t>(c)] = true;

  std::vector<std::vector<Rational>> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<size_t>(f)]) continue;
    std::vector<Rational> x(static_cast<size_t>(cols), Rational(0));
    x[static_cast<size_t>(f)] = 1;
    for (int i = static_cast<int>(piv.size()) - 1; i >= 0; --i) {
      int pc = piv[static_cast<size_t>(i)];
      Rational acc = 0;
      for (int j = pc + 1; j < cols; ++j) {
        if (sgn(x[static_cast<size_t>(j)]) == 0 || sgn(m(i, j)) == 0) continue;
        acc += Rational(m(i, j)) * x[static_cast<size_t>(j)];
      }
      x[static_cast<size_t>(pc)] = -acc / Rational(m(i, pc));
    }
    // Primitive integer scaling, first nonzero entry positive.
    Integer l = 1, g = 0;
    for (const auto& q : x) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
    for (const auto& q : x) {
      Integer v = q.get_num() * (l / q.get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    }
    Rational s(l, g);
    s.canonicalize();
    for (const auto& q : x)
      if (sgn(q) != 0) {
        if (sgn(q) < 0) s = -s;
        break;
      }
    for (auto& q : x) q *= s;
    basis.push_back(std::move(x));
  }
  return basis;
}

FloatNullspace nullspace_float(const std::vector<std::vector<BigComplex>>& rows, int cols, const BigFloat& rel_tol) {
  const int m = static_cast<int>(rows.size());
  const int n = cols;
  std::vector<std::vector<BigComplex>> a(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != n) throw InvalidArgument("nullspace_float: ragged row");
    a[static_cast<size_t>(i)] = rows[static_cast<size_t>(i)];
  }
  auto A = [&](int i, int j) -> BigComplex& { return a[static_cast<size_t>(i)][static_cast<size_t>(j)]; };
  std::vector<int> perm(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) perm[static_cast<size_t>(j)] = j;

  auto col_norm2 = [&](int j, int from) {
    BigFloat s = 0;
    for (int i = from; i < m; ++i) s += norm(A(i, j));
    return s;
  };

  FloatNullspace out;
  BigFloat r00 = 0;
  int rank = 0;
  const int kmax = std::min(m, n);
  out.largest_dropped_pivot = 0;
  for (int k = 0; k < kmax; ++k) {
    int best = k;
    BigFloat bestn = col_norm2(k, k);
    for (int j = k + 1; j < n; ++j) {
      BigFloat v = col_norm2(j, k);
      if (v > bestn) {
        bestn = v;
        best = j;
      }
    }
    BigFloat nrm = sqrt(bestn);
    if (k == 0) r00 = nrm;
    if (r00 == 0 || nrm <= rel_tol * r00) {
      out.largest_dropped_pivot = nrm;
      break;
    }
    if (best != k) {
      for (int i = 0; i < m; ++i) std::swap(A(i, k), A(i, best));
      std::swap(perm[static_cast<size_t>(k)], perm[static_cast<size_t>(best)]);
    }
    // Householder reflector mapping A[k:,k] to alpha e_1.
    BigComplex x0 = A(k, k);
    BigFloat ax0 = abs(x0);
    BigComplex phase = ax0 == 0 ? BigComplex(1) : BigComplex(x0 / ax0);
    BigComplex alpha = -phase * nrm;
    std::vector<BigComplex> v(static_cast<size_t>(m - k));
    for (int i = k; i < m; ++i) v[static_cast<size_t>(i - k)] = A(i, k);
    v[0] -= alpha;
    BigFloat vn2 = 0;
    for (const auto& t : v) vn2 += norm(t);
    if (vn2 > 0) {
      for (int j = k; j < n; ++j) {
        BigComplex dot = 0;
        for (int i = k; i < m; ++i) dot += conj(v[static_cast<size_t>(i - k)]) * A(i, j);
        BigComplex f = BigFloat(2) * dot / vn2;
        for (int i = k; i < m; ++i) A(i, j) -= f * v[static_cast<size_t>(i - k)];
      }
    }
    A(k, k) = alpha;
    for (int i = k + 1; i < m; ++i) A(i, k) = 0;
    out.smallest_kept_pivot = nrm;
    ++rank;
  }
  if (rank == kmax && kmax < n) {
    out.largest_dropped_pivot = 0;
  }
  out.rank = rank;

  for (int f = rank; f < n; ++f) {
    std::vector<BigComplex> y(static_cast<size_t>(n), BigComplex(0));
    y[static_cast<size_t>(f)] = 1;
    for (int i = rank - 1; i >= 0; --i) {
      BigComplex acc = A(i, f);
      for (int j = i + 1; j < rank; ++j) acc += A(i, j) * y[static_cast<size_t>(j)];
      y[static_cast<size_t>(i)] = -acc / A(i, i);
    }
    std::vector<BigComplex> x(static_cast<size_t>(n));
    BigFloat s = 0;
    for (int j = 0; j < n; ++j) {
      x[static_cast<size_t>(perm[static_cast<size_t>(j)])] = y[static_cast<size_t>(j)];
      s += norm(y[static_cast<size_t>(j)]);
    }
    s = sqrt(s);
    for (auto& t : x) t /= s;
    out.basis.push_back(std::move(x));
  }
  return out;
}

}  // namespace hplab
