#pragma once

// Exact linear algebra over the supported coefficient rings.
//
// Conventions:
//  * a linear map is stored with columns = images of the domain basis,
//    so kernel_rows(A) generates {x : A x = 0} and solve_columns(A, v)
//    finds x with A x = v;
//  * a span of vectors is stored as a matrix of generator ROWS, and
//    span_canon computes its unique canonical form (reduced echelon over
//    fields, Howell form over Z/p^N, primitive cleared form over F_p[x]).

#include <optional>
#include <string>
#include <vector>

#include "pdcalc/arith.hpp"

namespace pdcalc {

struct Mat {
  Ring R;
  int rows = 0;
  int cols = 0;
  std::vector<RElem> a;  // row-major

  static Mat zero(const Ring& R, int rows, int cols);
  static Mat identity(const Ring& R, int n);

  RElem& at(int i, int j) { return a[static_cast<size_t>(i * cols + j)]; }
  const RElem& at(int i, int j) const {
    return a[static_cast<size_t>(i * cols + j)];
  }

  std::vector<RElem> row(int i) const;
  std::vector<RElem> col(int j) const;
  void set_row(int i, const std::vector<RElem>& v);

  bool is_zero() const;
  std::string str() const;  // for diagnostics
};

bool mat_eq(const Mat& A, const Mat& B);
Mat mat_mul(const Mat& A, const Mat& B);
std::vector<RElem> mat_apply(const Mat& A, const std::vector<RElem>& x);
Mat mat_transpose(const Mat& A);
Mat mat_vstack(const Mat& A, const Mat& B);
Mat mat_hstack(const Mat& A, const Mat& B);
Mat mat_cols(const Mat& A, const std::vector<int>& which);
Mat mat_from_rows(const Ring& R, const std::vector<std::vector<RElem>>& rows,
                  int cols);
Mat mat_scale(const Mat& A, const RElem& s);
Mat mat_sub(const Mat& A, const Mat& B);

// Unique canonical form of the row span, plus the transform: H = U * A
// restricted to the surviving rows (zero rows are dropped). pivot_col[i] is
// the leading column of row i; pivot_val[i] its p-valuation over Z/p^N
// (always 0 over fields).
struct RowCanonical {
  Mat H;
  Mat U;
  std::vector<int> pivot_col;
  std::vector<int> pivot_val;
};

RowCanonical row_canonicalize(const Mat& A);

// Diagonalization D = U * A * V over Z/p^N with invertible U, V; diagonal
// entries are powers of p (or zero) in nondecreasing valuation order.
struct SmithResult {
  Mat D, U, V;
};

SmithResult smith(const Mat& A);

// Rows generate the right kernel {x : A x = 0}; canonicalized.
Mat kernel_rows(const Mat& A);

struct SolveResult {
  bool ok = false;
  std::vector<RElem> x;
};

// Solve A x = v exactly. Over F_p[param] this finds polynomial solutions
// (searching multiplier degrees up to an internal Cramer-style bound).
SolveResult solve_columns(const Mat& A, const std::vector<RElem>& v);

bool in_column_span(const Mat& A, const std::vector<RElem>& v);

// Row-span calculus. All results canonical.
Mat span_canon(const Mat& gens);
bool span_member(const Mat& gens, const std::vector<RElem>& v);
SolveResult span_coords(const Mat& gens, const std::vector<RElem>& v);
Mat span_sum(const Mat& A, const Mat& B);
Mat span_intersect(const Mat& A, const Mat& B);
bool span_equal(const Mat& A, const Mat& B);
bool span_contains(const Mat& big, const Mat& small);

// Dimension over a field; over Z/p^N the "length" log_p |span| instead.
int span_length(const Mat& canonical_gens);

// Entry-wise specialization of a Poly/RationalFunctions matrix at a point of
// the target field. Throws PoleAtSpecialization on denominator vanishing.
Mat mat_specialize(const Mat& A, const Ring& target, const RElem& point);

// Convert a F_p[x] matrix to F_p(x) entries (for field-side computations).
Mat mat_poly_to_ratfun(const Mat& A);

}  // namespace pdcalc
