#include "pdcalc/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace pdcalc {

namespace {

void check_same_ring(const Mat& A, const Mat& B) {
  if (!(A.R == B.R)) throw CalcError("matrix ring mismatch");
}

bool is_zmod_chain(const Ring& R) {
  return R.kind == RingKind::IntegersModPrimePower && R.n_exp > 1;
}

mpz_class p_power(long p, int e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p),
                static_cast<unsigned long>(e));
  return r;
}

}  // namespace

Mat Mat::zero(const Ring& R, int rows, int cols) {
  Mat M;
  M.R = R;
  M.rows = rows;
  M.cols = cols;
  M.a.assign(static_cast<size_t>(rows) * static_cast<size_t>(cols), r_zero(R));
  return M;
}

Mat Mat::identity(const Ring& R, int n) {
  Mat M = zero(R, n, n);
  for (int i = 0; i < n; ++i) M.at(i, i) = r_one(R);
  return M;
}

std::vector<RElem> Mat::row(int i) const {
  std::vector<RElem> v;
  v.reserve(static_cast<size_t>(cols));
  for (int j = 0; j < cols; ++j) v.push_back(at(i, j));
  return v;
}

std::vector<RElem> Mat::col(int j) const {
  std::vector<RElem> v;
  v.reserve(static_cast<size_t>(rows));
  for (int i = 0; i < rows; ++i) v.push_back(at(i, j));
  return v;
}

void Mat::set_row(int i, const std::vector<RElem>& v) {
  if (static_cast<int>(v.size()) != cols) throw CalcError("row length mismatch");
  for (int j = 0; j < cols; ++j) at(i, j) = v[static_cast<size_t>(j)];
}

bool Mat::is_zero() const {
  for (auto& e : a)
    if (!r_is_zero(R, e)) return false;
  return true;
}

std::string Mat::str() const {
  std::ostringstream os;
  for (int i = 0; i < rows; ++i) {
    os << "[";
    for (int j = 0; j < cols; ++j) {
      if (j) os << ", ";
      os << r_str(R, at(i, j));
    }
    os << "]\n";
  }
  return os.str();
}

bool mat_eq(const Mat& A, const Mat& B) {
  if (!(A.R == B.R) || A.rows != B.rows || A.cols != B.cols) return false;
  for (size_t i = 0; i < A.a.size(); ++i)
    if (!r_eq(A.R, A.a[i], B.a[i])) return false;
  return true;
}

Mat mat_mul(const Mat& A, const Mat& B) {
  check_same_ring(A, B);
  if (A.cols != B.rows) throw CalcError("matrix dimension mismatch");
  Mat C = Mat::zero(A.R, A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      if (r_is_zero(A.R, A.at(i, k))) continue;
      for (int j = 0; j < B.cols; ++j)
        C.at(i, j) = r_add(A.R, C.at(i, j), r_mul(A.R, A.at(i, k), B.at(k, j)));
    }
  return C;
}

std::vector<RElem> mat_apply(const Mat& A, const std::vector<RElem>& x) {
  if (static_cast<int>(x.size()) != A.cols)
    throw CalcError("vector length mismatch");
  std::vector<RElem> y(static_cast<size_t>(A.rows), r_zero(A.R));
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j)
      if (!r_is_zero(A.R, A.at(i, j)))
        y[static_cast<size_t>(i)] =
            r_add(A.R, y[static_cast<size_t>(i)],
                  r_mul(A.R, A.at(i, j), x[static_cast<size_t>(j)]));
  return y;
}

Mat mat_transpose(const Mat& A) {
  Mat T = Mat::zero(A.R, A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

Mat mat_vstack(const Mat& A, const Mat& B) {
  check_same_ring(A, B);
  if (A.cols != B.cols) throw CalcError("column count mismatch");
  Mat C = Mat::zero(A.R, A.rows + B.rows, A.cols);
  std::copy(A.a.begin(), A.a.end(), C.a.begin());
  std::copy(B.a.begin(), B.a.end(), C.a.begin() + static_cast<long>(A.a.size()));
  return C;
}

Mat mat_hstack(const Mat& A, const Mat& B) {
  check_same_ring(A, B);
  if (A.rows != B.rows) throw CalcError("row count mismatch");
  Mat C = Mat::zero(A.R, A.rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
    for (int j = 0; j < B.cols; ++j) C.at(i, A.cols + j) = B.at(i, j);
  }
  return C;
}

Mat mat_cols(const Mat& A, const std::vector<int>& which) {
  Mat C = Mat::zero(A.R, A.rows, static_cast<int>(which.size()));
  for (int i = 0; i < A.rows; ++i)
    for (size_t j = 0; j < which.size(); ++j)
      C.at(i, static_cast<int>(j)) = A.at(i, which[j]);
  return C;
}

Mat mat_from_rows(const Ring& R, const std::vector<std::vector<RElem>>& rows,
                  int cols) {
  Mat M = Mat::zero(R, static_cast<int>(rows.size()), cols);
  for (size_t i = 0; i < rows.size(); ++i) M.set_row(static_cast<int>(i), rows[i]);
  return M;
}

Mat mat_scale(const Mat& A, const RElem& s) {
  Mat C = A;
  for (auto& e : C.a) e = r_mul(A.R, e, s);
  return C;
}

Mat mat_sub(const Mat& A, const Mat& B) {
  check_same_ring(A, B);
  if (A.rows != B.rows || A.cols != B.cols)
    throw CalcError("matrix dimension mismatch");
  Mat C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = r_sub(A.R, C.a[i], B.a[i]);
  return C;
}

// ----------------------------------------------------------------------------
// Reduced row echelon form over a field, with transform.
// ----------------------------------------------------------------------------

namespace {

RowCanonical rref_field(const Mat& A) {
  const Ring& R = A.R;
  Mat W = A;
  Mat U = Mat::identity(R, A.rows);
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < W.cols && row < W.rows; ++col) {
    int sel = -1;
    for (int i = row; i < W.rows; ++i)
      if (!r_is_zero(R, W.at(i, col))) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != row) {
      for (int j = 0; j < W.cols; ++j) std::swap(W.at(sel, j), W.at(row, j));
      for (int j = 0; j < U.cols; ++j) std::swap(U.at(sel, j), U.at(row, j));
    }
    RElem inv = r_inv(R, W.at(row, col));
    for (int j = 0; j < W.cols; ++j) W.at(row, j) = r_mul(R, W.at(row, j), inv);
    for (int j = 0; j < U.cols; ++j) U.at(row, j) = r_mul(R, U.at(row, j), inv);
    for (int i = 0; i < W.rows; ++i) {
      if (i == row || r_is_zero(R, W.at(i, col))) continue;
      RElem f = W.at(i, col);
      for (int j = 0; j < W.cols; ++j)
        W.at(i, j) = r_sub(R, W.at(i, j), r_mul(R, f, W.at(row, j)));
      for (int j = 0; j < U.cols; ++j)
        U.at(i, j) = r_sub(R, U.at(i, j), r_mul(R, f, U.at(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  RowCanonical out;
  out.H = Mat::zero(R, row, W.cols);
  out.U = Mat::zero(R, row, U.cols);
  for (int i = 0; i < row; ++i) {
    out.H.set_row(i, W.row(i));
    out.U.set_row(i, U.row(i));
  }
  out.pivot_col = pivots;
  out.pivot_val.assign(pivots.size(), 0);
  return out;
}

// ----------------------------------------------------------------------------
// Howell form over Z/p^N with transform. The result is the unique canonical
// generating set of the row span: rows ordered by leading column, each pivot
// an exact power of p, entries above a pivot reduced modulo it, and the span
// closed under multiplication by annihilators (so that membership can be
// decided by greedy reduction).
// ----------------------------------------------------------------------------

struct WorkRow {
  std::vector<RElem> w;
  std::vector<RElem> u;
};

bool row_is_zero(const Ring& R, const std::vector<RElem>& v) {
  for (auto& e : v)
    if (!r_is_zero(R, e)) return false;
  return true;
}

RowCanonical howell_zmod(const Mat& A) {
  const Ring& R = A.R;
  const long p = R.p;
  const int N = R.n_exp;

  std::vector<WorkRow> pool;
  for (int i = 0; i < A.rows; ++i) {
    WorkRow wr;
    wr.w = A.row(i);
    wr.u.assign(static_cast<size_t>(A.rows), r_zero(R));
    wr.u[static_cast<size_t>(i)] = r_one(R);
    pool.push_back(std::move(wr));
  }

  auto val_of = [&](const RElem& e) { return r_zmod_valuation(R, e); };
  auto scale_row = [&](WorkRow& wr, const RElem& s) {
    for (auto& e : wr.w) e = r_mul(R, e, s);
    for (auto& e : wr.u) e = r_mul(R, e, s);
  };
  auto axpy = [&](WorkRow& dst, const RElem& c, const WorkRow& src) {
    for (size_t j = 0; j < dst.w.size(); ++j)
      dst.w[j] = r_sub(R, dst.w[j], r_mul(R, c, src.w[j]));
    for (size_t j = 0; j < dst.u.size(); ++j)
      dst.u[j] = r_sub(R, dst.u[j], r_mul(R, c, src.u[j]));
  };

  std::vector<int> pivot_cols, pivot_vals;

  for (int guard = 0;; ++guard) {
    if (guard > A.cols * (N + 1) + 2)
      throw CalcError("canonical form iteration failed to stabilize");
    pivot_cols.clear();
    pivot_vals.clear();

    // echelonize: in each column pick the entry of least valuation
    size_t rowpos = 0;
    for (int col = 0; col < A.cols; ++col) {
      int best = -1, best_val = N + 1;
      for (size_t i = rowpos; i < pool.size(); ++i) {
        const RElem& e = pool[i].w[static_cast<size_t>(col)];
        if (r_is_zero(R, e)) continue;
        int v = val_of(e);
        if (v < best_val) {
          best_val = v;
          best = static_cast<int>(i);
        }
      }
      if (best < 0) continue;
      std::swap(pool[static_cast<size_t>(best)], pool[rowpos]);
      WorkRow& piv = pool[rowpos];
      {
        const mpz_class& lift =
            std::get<mpz_class>(piv.w[static_cast<size_t>(col)]);
        mpz_class unit = lift / p_power(p, best_val);
        scale_row(piv, r_inv(R, RElem(unit)));
      }
      for (size_t i = 0; i < pool.size(); ++i) {
        if (i == rowpos) continue;
        const RElem& e = pool[i].w[static_cast<size_t>(col)];
        if (r_is_zero(R, e)) continue;
        if (i < rowpos && val_of(e) < best_val) continue;  // only reducible mod p^v
        const mpz_class& c = std::get<mpz_class>(e);
        mpz_class q = c / p_power(p, best_val);
        if (q != 0) axpy(pool[i], r_from_int(R, q), piv);
      }
      pivot_cols.push_back(col);
      pivot_vals.push_back(best_val);
      ++rowpos;
    }
    pool.resize(rowpos);

    // closure: the annihilator multiple of each non-unit pivot row must
    // itself reduce to zero against the form; otherwise adopt its remainder
    size_t npiv = pool.size();
    bool added = false;
    for (size_t i = 0; i < npiv; ++i) {
      if (pivot_vals[i] == 0) continue;
      WorkRow cand = pool[i];
      RElem mult = r_from_int(R, p_power(p, N - pivot_vals[i]));
      for (auto& e : cand.w) e = r_mul(R, e, mult);
      for (auto& e : cand.u) e = r_mul(R, e, mult);
      for (size_t k = 0; k < npiv; ++k) {
        const RElem& e = cand.w[static_cast<size_t>(pivot_cols[k])];
        if (r_is_zero(R, e)) continue;
        if (val_of(e) < pivot_vals[k]) break;  // new leading behavior; keep
        const mpz_class& c = std::get<mpz_class>(e);
        mpz_class q = c / p_power(p, pivot_vals[k]);
        axpy(cand, r_from_int(R, q), pool[k]);
      }
      if (!row_is_zero(R, cand.w)) {
        pool.push_back(std::move(cand));
        added = true;
      }
    }
    if (!added) break;
  }

  // entries above each pivot reduced modulo the pivot power
  for (size_t i = 0; i < pool.size(); ++i) {
    mpz_class pv = p_power(p, pivot_vals[i]);
    for (size_t k = 0; k < i; ++k) {
      const RElem& e = pool[k].w[static_cast<size_t>(pivot_cols[i])];
      if (r_is_zero(R, e)) continue;
      const mpz_class& c = std::get<mpz_class>(e);
      mpz_class q = c / pv;
      if (q != 0) {
        auto axpy = [&](WorkRow& dst, const RElem& cc, const WorkRow& src) {
          for (size_t j = 0; j < dst.w.size(); ++j)
            dst.w[j] = r_sub(R, dst.w[j], r_mul(R, cc, src.w[j]));
          for (size_t j = 0; j < dst.u.size(); ++j)
            dst.u[j] = r_sub(R, dst.u[j], r_mul(R, cc, src.u[j]));
        };
        axpy(pool[k], r_from_int(R, q), pool[i]);
      }
    }
  }

  RowCanonical out;
  out.H = Mat::zero(R, static_cast<int>(pool.size()), A.cols);
  out.U = Mat::zero(R, static_cast<int>(pool.size()), A.rows);
  for (size_t i = 0; i < pool.size(); ++i) {
    out.H.set_row(static_cast<int>(i), pool[i].w);
    out.U.set_row(static_cast<int>(i), pool[i].u);
  }
  out.pivot_col = pivot_cols;
  out.pivot_val = pivot_vals;
  return out;
}

// ----------------------------------------------------------------------------
// F_p[x]: canonicalize via the function field, then clear to primitive rows.
// ----------------------------------------------------------------------------

Ring ratfun_of_poly(const Ring& R) { return ring_ratfun(R.p, R.param); }

RElem poly_to_rat(const RElem& e) {
  const FpPoly& f = std::get<FpPoly>(e);
  return rat_make(f, FpPoly::constant(f.p, 1));
}

Mat to_ratfun(const Mat& A) {
  Mat B = Mat::zero(ratfun_of_poly(A.R), A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) B.a[i] = poly_to_rat(A.a[i]);
  return B;
}

FpPoly fp_lcm(const FpPoly& a, const FpPoly& b) {
  FpPoly g = fp_gcd(a, b);
  return fp_divmod(a * b, g).first;
}

// Clear denominators and content; make the first nonzero entry's leading
// coefficient 1.
std::vector<RElem> clear_rat_row(const Ring& poly_ring,
                                 const std::vector<RElem>& row) {
  long p = poly_ring.p;
  FpPoly L = FpPoly::constant(p, 1);
  for (auto& e : row) {
    const RatFun& f = std::get<RatFun>(e);
    if (!f.num.is_zero()) L = fp_lcm(L, f.den);
  }
  std::vector<FpPoly> cleared;
  cleared.reserve(row.size());
  for (auto& e : row) {
    const RatFun& f = std::get<RatFun>(e);
    cleared.push_back(f.num * fp_divmod(L, f.den).first);
  }
  FpPoly content = FpPoly::zero(p);
  for (auto& f : cleared)
    if (!f.is_zero()) content = content.is_zero() ? f : fp_gcd(content, f);
  if (!content.is_zero() && content.degree() > 0) {
    content = content.scaled(fp_inv_scalar(content.leading(), p));
    for (auto& f : cleared) f = fp_divmod(f, content).first;
  }
  long lead = 0;
  for (auto& f : cleared)
    if (!f.is_zero()) {
      lead = f.leading();
      break;
    }
  std::vector<RElem> out;
  out.reserve(cleared.size());
  if (lead != 0) {
    long inv = fp_inv_scalar(lead, p);
    for (auto& f : cleared) out.emplace_back(f.scaled(inv));
  } else {
    for (auto& f : cleared) out.emplace_back(f);
  }
  return out;
}

RowCanonical canonical_poly(const Mat& A) {
  RowCanonical rat = rref_field(to_ratfun(A));
  RowCanonical out;
  out.H = Mat::zero(A.R, rat.H.rows, rat.H.cols);
  for (int i = 0; i < rat.H.rows; ++i)
    out.H.set_row(i, clear_rat_row(A.R, rat.H.row(i)));
  // transforms over the function field are not carried back to F_p[x]
  out.U = Mat::zero(A.R, 0, 0);
  out.pivot_col = rat.pivot_col;
  out.pivot_val.assign(rat.pivot_col.size(), 0);
  return out;
}

}  // namespace

RowCanonical row_canonicalize(const Mat& A) {
  if (is_zmod_chain(A.R)) return howell_zmod(A);
  if (A.R.kind == RingKind::PolyOverPrimeField) return canonical_poly(A);
  return rref_field(A);
}

// ----------------------------------------------------------------------------
// Diagonal form over Z/p^N.
// ----------------------------------------------------------------------------

SmithResult smith(const Mat& A) {
  const Ring& R = A.R;
  if (R.kind != RingKind::IntegersModPrimePower)
    throw UnsupportedRing("diagonal form needs Z/p^N");
  const long p = R.p;
  const int N = R.n_exp;

  Mat D = A;
  Mat U = Mat::identity(R, A.rows);
  Mat V = Mat::identity(R, A.cols);

  auto val_of = [&](const RElem& e) { return r_zmod_valuation(R, e); };

  int limit = std::min(A.rows, A.cols);
  for (int k = 0; k < limit; ++k) {
    int bi = -1, bj = -1, bv = N + 1;
    for (int i = k; i < A.rows; ++i)
      for (int j = k; j < A.cols; ++j) {
        if (r_is_zero(R, D.at(i, j))) continue;
        int v = val_of(D.at(i, j));
        if (v < bv) {
          bv = v;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) break;
    if (bi != k)
      for (int j = 0; j < A.cols; ++j) std::swap(D.at(bi, j), D.at(k, j));
    if (bi != k)
      for (int j = 0; j < U.cols; ++j) std::swap(U.at(bi, j), U.at(k, j));
    if (bj != k)
      for (int i = 0; i < A.rows; ++i) std::swap(D.at(i, bj), D.at(i, k));
    if (bj != k)
      for (int i = 0; i < V.rows; ++i) std::swap(V.at(i, bj), V.at(i, k));

    {
      const mpz_class& lift = std::get<mpz_class>(D.at(k, k));
      mpz_class unit = lift / p_power(p, bv);
      RElem inv = r_inv(R, RElem(unit));
      for (int j = 0; j < A.cols; ++j) D.at(k, j) = r_mul(R, D.at(k, j), inv);
      for (int j = 0; j < U.cols; ++j) U.at(k, j) = r_mul(R, U.at(k, j), inv);
    }
    mpz_class pv = p_power(p, bv);
    for (int i = k + 1; i < A.rows; ++i) {
      if (r_is_zero(R, D.at(i, k))) continue;
      mpz_class q = std::get<mpz_class>(D.at(i, k)) / pv;
      RElem f = r_from_int(R, q);
      for (int j = 0; j < A.cols; ++j)
        D.at(i, j) = r_sub(R, D.at(i, j), r_mul(R, f, D.at(k, j)));
      for (int j = 0; j < U.cols; ++j)
        U.at(i, j) = r_sub(R, U.at(i, j), r_mul(R, f, U.at(k, j)));
    }
    for (int j = k + 1; j < A.cols; ++j) {
      if (r_is_zero(R, D.at(k, j))) continue;
      mpz_class q = std::get<mpz_class>(D.at(k, j)) / pv;
      RElem f = r_from_int(R, q);
      for (int i = 0; i < A.rows; ++i)
        D.at(i, j) = r_sub(R, D.at(i, j), r_mul(R, f, D.at(i, k)));
      for (int i = 0; i < V.rows; ++i)
        V.at(i, j) = r_sub(R, V.at(i, j), r_mul(R, f, V.at(i, k)));
    }
  }
  return SmithResult{D, U, V};
}

// ----------------------------------------------------------------------------
// Kernels
// ----------------------------------------------------------------------------

namespace {

Mat kernel_field(const Mat& A) {
  RowCanonical rc = rref_field(A);
  const Ring& R = A.R;
  std::vector<bool> is_pivot(static_cast<size_t>(A.cols), false);
  for (int c : rc.pivot_col) is_pivot[static_cast<size_t>(c)] = true;
  std::vector<std::vector<RElem>> gens;
  for (int f = 0; f < A.cols; ++f) {
    if (is_pivot[static_cast<size_t>(f)]) continue;
    std::vector<RElem> x(static_cast<size_t>(A.cols), r_zero(R));
    x[static_cast<size_t>(f)] = r_one(R);
    for (size_t r = 0; r < rc.pivot_col.size(); ++r)
      x[static_cast<size_t>(rc.pivot_col[r])] =
          r_neg(R, rc.H.at(static_cast<int>(r), f));
    gens.push_back(std::move(x));
  }
  return mat_from_rows(R, gens, A.cols);
}

Mat kernel_zmod(const Mat& A) {
  const Ring& R = A.R;
  const long p = R.p;
  const int N = R.n_exp;
  SmithResult s = smith(A);
  std::vector<std::vector<RElem>> gens;
  for (int i = 0; i < A.cols; ++i) {
    int v = N;
    if (i < std::min(A.rows, A.cols) && !r_is_zero(R, s.D.at(i, i)))
      v = r_zmod_valuation(R, s.D.at(i, i));
    if (v == 0) continue;
    RElem mult = r_from_int(R, p_power(p, N - v));
    std::vector<RElem> x(static_cast<size_t>(A.cols), r_zero(R));
    bool nonzero = false;
    for (int row = 0; row < A.cols; ++row) {
      x[static_cast<size_t>(row)] = r_mul(R, s.V.at(row, i), mult);
      nonzero = nonzero || !r_is_zero(R, x[static_cast<size_t>(row)]);
    }
    if (nonzero) gens.push_back(std::move(x));
  }
  return mat_from_rows(R, gens, A.cols);
}

Mat kernel_poly(const Mat& A) {
  Mat K = kernel_field(to_ratfun(A));
  Mat out = Mat::zero(A.R, K.rows, K.cols);
  for (int i = 0; i < K.rows; ++i)
    out.set_row(i, clear_rat_row(A.R, K.row(i)));
  return out;
}

}  // namespace

Mat kernel_rows(const Mat& A) {
  Mat gens = is_zmod_chain(A.R)                             ? kernel_zmod(A)
             : (A.R.kind == RingKind::PolyOverPrimeField) ? kernel_poly(A)
                                                          : kernel_field(A);
  return span_canon(gens);
}

// ----------------------------------------------------------------------------
// Solving
// ----------------------------------------------------------------------------

namespace {

SolveResult solve_field(const Mat& A, const std::vector<RElem>& v) {
  const Ring& R = A.R;
  Mat vc = Mat::zero(R, A.rows, 1);
  for (int i = 0; i < A.rows; ++i) vc.at(i, 0) = v[static_cast<size_t>(i)];
  Mat aug = mat_hstack(A, vc);
  RowCanonical rc = rref_field(aug);
  SolveResult out;
  for (int c : rc.pivot_col)
    if (c == A.cols) return out;  // inconsistent
  out.ok = true;
  out.x.assign(static_cast<size_t>(A.cols), r_zero(R));
  for (size_t r = 0; r < rc.pivot_col.size(); ++r)
    out.x[static_cast<size_t>(rc.pivot_col[r])] =
        rc.H.at(static_cast<int>(r), A.cols);
  return out;
}

SolveResult solve_zmod(const Mat& A, const std::vector<RElem>& v) {
  const Ring& R = A.R;
  const long p = R.p;
  RowCanonical rc = howell_zmod(mat_transpose(A));
  SolveResult out;
  std::vector<RElem> cur = v;
  std::vector<RElem> coeff(static_cast<size_t>(rc.H.rows), r_zero(R));
  for (int i = 0; i < rc.H.rows; ++i) {
    int col = rc.pivot_col[static_cast<size_t>(i)];
    const RElem& e = cur[static_cast<size_t>(col)];
    if (r_is_zero(R, e)) continue;
    int ev = r_zmod_valuation(R, e);
    int pv = rc.pivot_val[static_cast<size_t>(i)];
    if (ev < pv) return out;  // leading coefficient not reachable
    mpz_class q = std::get<mpz_class>(e) / p_power(p, pv);
    RElem f = r_from_int(R, q);
    coeff[static_cast<size_t>(i)] = f;
    for (int j = 0; j < rc.H.cols; ++j)
      cur[static_cast<size_t>(j)] =
          r_sub(R, cur[static_cast<size_t>(j)], r_mul(R, f, rc.H.at(i, j)));
  }
  if (!row_is_zero(R, cur)) return out;
  out.ok = true;
  out.x.assign(static_cast<size_t>(A.cols), r_zero(R));
  for (int i = 0; i < rc.U.rows; ++i)
    for (int j = 0; j < rc.U.cols; ++j)
      out.x[static_cast<size_t>(j)] =
          r_add(R, out.x[static_cast<size_t>(j)],
                r_mul(R, coeff[static_cast<size_t>(i)], rc.U.at(i, j)));
  return out;
}

// Polynomial solutions over F_p[x] by matching coefficients of x^t up to a
// Cramer-style degree bound.
SolveResult solve_poly(const Mat& A, const std::vector<RElem>& v) {
  const Ring& R = A.R;
  long p = R.p;
  int d = 0;
  for (auto& e : A.a) d = std::max(d, std::get<FpPoly>(e).degree());
  for (auto& e : v) d = std::max(d, std::get<FpPoly>(e).degree());
  if (d < 0) d = 0;
  int bound = std::min((A.cols + 1) * (d + 1) + 2, 80);

  Ring fp = ring_fp(p);
  int eq_deg = d + bound + 1;  // x-degrees 0..eq_deg-1
  Mat M = Mat::zero(fp, A.rows * eq_deg, A.cols * (bound + 1));
  auto poly_coeff = [](const FpPoly& f, int t) -> long {
    return (t >= 0 && t <= f.degree()) ? f.c[static_cast<size_t>(t)] : 0;
  };
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      const FpPoly& f = std::get<FpPoly>(A.at(i, j));
      if (f.is_zero()) continue;
      for (int t = 0; t <= bound; ++t)
        for (int s = 0; s <= f.degree(); ++s)
          M.at(i * eq_deg + (t + s), j * (bound + 1) + t) =
              r_from_int(fp, f.c[static_cast<size_t>(s)]);
    }
  std::vector<RElem> rhs;
  rhs.reserve(static_cast<size_t>(A.rows * eq_deg));
  for (int i = 0; i < A.rows; ++i) {
    const FpPoly& f = std::get<FpPoly>(v[static_cast<size_t>(i)]);
    for (int t = 0; t < eq_deg; ++t)
      rhs.push_back(r_from_int(fp, poly_coeff(f, t)));
  }
  SolveResult flat = solve_field(M, rhs);
  SolveResult out;
  if (!flat.ok) return out;
  out.ok = true;
  out.x.reserve(static_cast<size_t>(A.cols));
  for (int j = 0; j < A.cols; ++j) {
    FpPoly f{p, {}};
    f.c.assign(static_cast<size_t>(bound) + 1, 0);
    for (int t = 0; t <= bound; ++t)
      f.c[static_cast<size_t>(t)] = static_cast<long>(
          std::get<mpz_class>(flat.x[static_cast<size_t>(j * (bound + 1) + t)])
              .get_si());
    f.normalize();
    out.x.emplace_back(std::move(f));
  }
  return out;
}

}  // namespace

SolveResult solve_columns(const Mat& A, const std::vector<RElem>& v) {
  if (static_cast<int>(v.size()) != A.rows)
    throw CalcError("right-hand side length mismatch");
  if (is_zmod_chain(A.R)) return solve_zmod(A, v);
  if (A.R.kind == RingKind::PolyOverPrimeField) return solve_poly(A, v);
  return solve_field(A, v);
}

bool in_column_span(const Mat& A, const std::vector<RElem>& v) {
  return solve_columns(A, v).ok;
}

// ----------------------------------------------------------------------------
// Span calculus (row spans)
// ----------------------------------------------------------------------------

Mat span_canon(const Mat& gens) { return row_canonicalize(gens).H; }

bool span_member(const Mat& gens, const std::vector<RElem>& v) {
  return solve_columns(mat_transpose(gens), v).ok;
}

SolveResult span_coords(const Mat& gens, const std::vector<RElem>& v) {
  return solve_columns(mat_transpose(gens), v);
}

Mat span_sum(const Mat& A, const Mat& B) {
  return span_canon(mat_vstack(A, B));
}

Mat span_intersect(const Mat& A, const Mat& B) {
  check_same_ring(A, B);
  if (A.cols != B.cols) throw CalcError("ambient dimension mismatch");
  if (A.rows == 0 || B.rows == 0) return Mat::zero(A.R, 0, A.cols);
  Mat C = mat_transpose(mat_vstack(A, B));  // cols: a-generators then b-generators
  Mat K = kernel_rows(C);
  std::vector<std::vector<RElem>> gens;
  for (int i = 0; i < K.rows; ++i) {
    std::vector<RElem> x(static_cast<size_t>(A.cols), r_zero(A.R));
    bool nonzero = false;
    for (int g = 0; g < A.rows; ++g) {
      const RElem& a = K.at(i, g);
      if (r_is_zero(A.R, a)) continue;
      for (int j = 0; j < A.cols; ++j) {
        x[static_cast<size_t>(j)] =
            r_add(A.R, x[static_cast<size_t>(j)], r_mul(A.R, a, A.at(g, j)));
      }
    }
    for (auto& e : x) nonzero = nonzero || !r_is_zero(A.R, e);
    if (nonzero) gens.push_back(std::move(x));
  }
  return span_canon(mat_from_rows(A.R, gens, A.cols));
}

bool span_equal(const Mat& A, const Mat& B) {
  return mat_eq(span_canon(A), span_canon(B));
}

bool span_contains(const Mat& big, const Mat& small) {
  for (int i = 0; i < small.rows; ++i)
    if (!span_member(big, small.row(i))) return false;
  return true;
}

int span_length(const Mat& canonical_gens) {
  const Ring& R = canonical_gens.R;
  if (!is_zmod_chain(R)) return canonical_gens.rows;
  RowCanonical rc = row_canonicalize(canonical_gens);
  int len = 0;
  for (int v : rc.pivot_val) len += R.n_exp - v;
  return len;
}

Mat mat_specialize(const Mat& A, const Ring& target, const RElem& point) {
  Mat B = Mat::zero(target, A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i)
    B.a[i] = r_specialize(A.R, A.a[i], target, point);
  return B;
}

Mat mat_poly_to_ratfun(const Mat& A) {
  if (A.R.kind != RingKind::PolyOverPrimeField)
    throw UnsupportedRing("expected a polynomial matrix");
  return to_ratfun(A);
}

}  // namespace pdcalc
