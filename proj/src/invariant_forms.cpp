#include "pdcalc/invariant_forms.hpp"

#include <algorithm>
#include <climits>
#include <sstream>
#include <utility>

#include "pdcalc/linalg.hpp"

namespace pdcalc {

namespace {

VarNamer coordinate_namer(const PdCtx& ctx, const std::string& coord) {
  int r = ctx.r;
  return [r, coord](int slot, int /*var*/) {
    if (r <= 1) return coord;
    return coord + std::to_string(slot + 1);
  };
}

std::string render_over_basis(const Ring& R, const std::vector<RElem>& v,
                              const PdCtx& ctx,
                              const std::vector<PdMono>& basis,
                              const std::string& coord) {
  VarNamer namer = coordinate_namer(ctx, coord);
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < v.size(); ++i) {
    if (r_is_zero(R, v[i])) continue;
    if (!first) os << " + ";
    first = false;
    std::string c = r_str(R, v[i]);
    std::string m = mono_str(ctx, basis[i], namer);
    if (c == "1")
      os << m;
    else if (c.find_first_of("+-") != std::string::npos && c.size() > 1)
      os << "(" << c << ")*" << m;
    else
      os << c << "*" << m;
  }
  if (first) os << "0";
  return os.str();
}

// Coefficient of param^d; any other symbolic parameter is an error here.
mpq_class coeff_in_param(const Universal& u, const std::string& param, int d) {
  mpq_class out = 0;
  for (const auto& [mono, q] : u.c) {
    int e = 0;
    for (const auto& [name, deg] : mono) {
      if (name != param)
        throw UnboundParameter("symbolic membership: unexpected parameter '" +
                               name + "'");
      e = deg;
    }
    if (e == d) out += q;
  }
  return out;
}

int fil_degree_of_support(const DeltaData& dd,
                          const std::vector<bool>& in_support) {
  int mn = INT_MAX;
  for (size_t j = 0; j < in_support.size(); ++j)
    if (in_support[j]) mn = std::min(mn, dd.w1.fil[j]);
  return mn == INT_MAX ? static_cast<int>(dd.bc.pl.pm) : mn;
}

}  // namespace

DeltaData build_delta(const GroupLaw& law, const PrimeLevel& pl, int trunc) {
  DeltaData dd;
  dd.shape = group_shape(law);
  dd.bc = BlContext{pl, 1, trunc};
  if (trunc < 2 * pl.pm)
    throw TruncationTooSmall(
        "closed-form analysis needs truncation >= 2*p^m so the degree-two "
        "relations are complete");
  dd.w1 = omega_presentation(dd.shape, dd.bc, 1);
  dd.w2 = omega_presentation(dd.shape, dd.bc, 2);
  dd.delta = bl_differential(dd.shape, dd.bc, 1);
  return dd;
}

Mat closed_form_rows(const Ring& R, const DeltaData& dd,
                     const std::map<std::string, RElem>& bind,
                     bool use_relations) {
  Mat D = umat_reduce(R, dd.delta, bind);
  Mat A = D;
  if (use_relations && dd.w2.relations.cols > 0)
    A = mat_hstack(D, umat_reduce(R, dd.w2.relations, bind));
  Mat K = kernel_rows(A);
  std::vector<std::vector<RElem>> vs;
  vs.reserve(static_cast<size_t>(K.rows));
  for (int i = 0; i < K.rows; ++i) {
    std::vector<RElem> full = K.row(i);
    vs.emplace_back(full.begin(), full.begin() + D.cols);
  }
  return span_canon(mat_from_rows(R, vs, D.cols));
}

std::vector<mpz_class> span_invariant_factors(const Ring& R, const Mat& rows) {
  std::vector<mpz_class> out;
  if (rows.rows == 0) return out;
  if (R.kind == RingKind::IntegersModPrimePower) {
    SmithResult s = smith(rows);
    int k = std::min(s.D.rows, s.D.cols);
    for (int i = 0; i < k; ++i) {
      const RElem& d = s.D.at(i, i);
      if (!r_is_zero(R, d)) out.push_back(std::get<mpz_class>(d));
    }
    return out;
  }
  out.assign(static_cast<size_t>(rows.rows), mpz_class(1));
  return out;
}

Mat fil_piece_rows(const Ring& R, const DeltaData& dd, int k,
                   const std::map<std::string, RElem>& bind,
                   bool use_relations) {
  int pm = static_cast<int>(dd.bc.pl.pm);
  if (k < 0 || k > pm)
    throw BandViolation("filtration index must lie in [0, p^m]");
  Mat ker = closed_form_rows(R, dd, bind, use_relations);
  if (k <= 1) return ker;  // every basis element has filtration >= 1
  int dim = static_cast<int>(dd.w1.basis.size());
  std::vector<std::vector<RElem>> unit;
  for (int j = 0; j < dim; ++j) {
    if (dd.w1.fil[j] < k) continue;
    std::vector<RElem> row(static_cast<size_t>(dim), r_zero(R));
    row[static_cast<size_t>(j)] = r_one(R);
    unit.push_back(std::move(row));
  }
  return span_intersect(ker, mat_from_rows(R, unit, dim));
}

Membership membership_check(const Ring& R, const DeltaData& dd,
                            const std::vector<RElem>& v,
                            const std::map<std::string, RElem>& bind,
                            bool use_relations) {
  int dim = static_cast<int>(dd.w1.basis.size());
  if (static_cast<int>(v.size()) != dim)
    throw CalcError("membership candidate has the wrong length");
  Mat D = umat_reduce(R, dd.delta, bind);
  std::vector<RElem> defect = mat_apply(D, v);
  Membership out;
  if (use_relations && dd.w2.relations.cols > 0) {
    out.closed = in_column_span(umat_reduce(R, dd.w2.relations, bind), defect);
  } else {
    out.closed = std::all_of(defect.begin(), defect.end(), [&](const RElem& x) {
      return r_is_zero(R, x);
    });
  }
  std::vector<bool> support(v.size());
  for (size_t j = 0; j < v.size(); ++j) support[j] = !r_is_zero(R, v[j]);
  out.fil_degree = fil_degree_of_support(dd, support);
  return out;
}

SymbolicMembership membership_check_symbolic(const Ring& R,
                                             const DeltaData& dd,
                                             const std::vector<Universal>& v,
                                             const std::string& param,
                                             int deg_cap) {
  if (R.kind != RingKind::IntegersModPrimePower)
    throw UnsupportedRing("symbolic membership works over Z/p^N");
  if (deg_cap < 0) throw CalcError("multiplier degree cap must be >= 0");
  int dim = static_cast<int>(dd.w1.basis.size());
  if (static_cast<int>(v.size()) != dim)
    throw CalcError("membership candidate has the wrong length");

  int amb = static_cast<int>(dd.w2.basis.size());
  std::vector<Universal> defect(static_cast<size_t>(amb), Universal::zero());
  for (int i = 0; i < amb; ++i)
    for (int j = 0; j < dim; ++j)
      defect[static_cast<size_t>(i)] += dd.delta.at(i, j) * v[static_cast<size_t>(j)];

  SymbolicMembership out;
  std::vector<bool> support(v.size());
  for (size_t j = 0; j < v.size(); ++j) support[j] = !v[j].is_zero();
  out.fil_degree = fil_degree_of_support(dd, support);

  long nrel = dd.w2.relations.cols;
  int rel_deg = 0, def_deg = 0;
  for (const Universal& u : dd.w2.relations.a)
    rel_deg = std::max(rel_deg, u.degree_in(param));
  for (const Universal& u : defect) def_deg = std::max(def_deg, u.degree_in(param));
  int top = std::max(def_deg, rel_deg + deg_cap);

  // One exact linear system over Z/p^N: unknowns w_{j,s} (relation column j,
  // multiplier lambda-degree s), equations indexed by (ambient row, degree).
  int nrows = amb * (top + 1);
  int ncols = static_cast<int>(nrel) * (deg_cap + 1);
  Mat A = Mat::zero(R, nrows, ncols);
  for (int j = 0; j < static_cast<int>(nrel); ++j)
    for (int s = 0; s <= deg_cap; ++s)
      for (int i = 0; i < amb; ++i)
        for (int d = s; d <= top; ++d) {
          if (d - s > rel_deg) continue;
          mpq_class c = coeff_in_param(dd.w2.relations.at(i, j), param, d - s);
          if (c != 0)
            A.at(i * (top + 1) + d, j * (deg_cap + 1) + s) =
                reduce_rational(R, c);
        }
  std::vector<RElem> target(static_cast<size_t>(nrows), r_zero(R));
  for (int i = 0; i < amb; ++i)
    for (int d = 0; d <= top; ++d) {
      mpq_class c = coeff_in_param(defect[static_cast<size_t>(i)], param, d);
      if (c != 0)
        target[static_cast<size_t>(i * (top + 1) + d)] = reduce_rational(R, c);
    }
  if (in_column_span(A, target)) {
    out.closed = true;
    return out;
  }

  // Impossibility proof from the grading: find the lowest filtration degree f
  // where the defect survives mod p^N; if every relation column vanishes on
  // all ambient rows of filtration <= f, no multiplier can reach the defect.
  int f_min = INT_MAX;
  for (int i = 0; i < amb; ++i) {
    bool nonzero = false;
    for (int d = 0; d <= def_deg && !nonzero; ++d)
      nonzero = !r_is_zero(
          R, reduce_rational(R, coeff_in_param(defect[static_cast<size_t>(i)],
                                               param, d)));
    if (nonzero) f_min = std::min(f_min, dd.w2.fil[static_cast<size_t>(i)]);
  }
  if (f_min != INT_MAX) {
    bool rel_silent_below = true;
    for (int i = 0; i < amb && rel_silent_below; ++i) {
      if (dd.w2.fil[static_cast<size_t>(i)] > f_min) continue;
      for (int j = 0; j < static_cast<int>(nrel); ++j)
        if (!dd.w2.relations.at(i, j).is_zero()) {
          rel_silent_below = false;
          break;
        }
    }
    out.obstruction_proven = rel_silent_below;
  }
  return out;
}

ScanPoint scan_at(const DeltaData& dd, const Ring& field, const RElem& lambda) {
  if (field.kind != RingKind::PrimeField && field.kind != RingKind::GaloisField)
    throw UnsupportedRing("fiber scans run over a prime or Galois field");
  if (dd.shape.law.params.size() != 1)
    throw UnsupportedKind("fiber scans need a one-parameter family");
  if (r_eq(field, lambda, r_zero(field)) ||
      r_eq(field, lambda, r_one(field)))
    throw PoleAtSpecialization(
        "lambda = 0 and lambda = 1 are the singular fibers of the family");
  std::map<std::string, RElem> bind{{dd.shape.law.params[0], lambda}};
  Mat ker = closed_form_rows(field, dd, bind, true);
  Mat naive = closed_form_rows(field, dd, bind, false);
  ScanPoint pt;
  pt.lambda = r_str(field, lambda);
  pt.rank = ker.rows;
  pt.naive_rank = naive.rows;
  pt.generators = render_form_rows(field, dd, ker);
  return pt;
}

ScanResult rank_scan(const DeltaData& dd, int e) {
  long p = dd.bc.pl.p;
  if (p == 2)
    throw UnsupportedRing("the fiber scan needs an odd prime (the chord "
                          "construction divides by 2)");
  if (e < 1 || e > 3)
    throw UnsupportedRing("fiber scans support extension degrees 1..3");
  if (dd.shape.law.params.size() != 1)
    throw UnsupportedKind("fiber scans need a one-parameter family");
  ScanResult res;
  res.p = p;
  res.e = e;
  Ring generic = ring_ratfun(p, dd.shape.law.params[0]);
  res.generic_rank = closed_form_rows(generic, dd).rows;
  Ring F = (e == 1) ? ring_fp(p) : ring_gf(p, e);
  for (const RElem& el : ring_all_elements(F)) {
    if (r_eq(F, el, r_zero(F)) || r_eq(F, el, r_one(F))) continue;
    ScanPoint pt = scan_at(dd, F, el);
    pt.supersingular = pt.rank > res.generic_rank;
    res.points.push_back(std::move(pt));
  }
  return res;
}

std::vector<std::string> nu_map_images(const GroupLaw& law,
                                       const PrimeLevel& pl) {
  std::vector<std::string> out;
  for (long j = 1; j <= pl.pm; ++j) {
    std::ostringstream os;
    switch (law.kind) {
      case GroupLawKind::Additive:
        os << "(dt)^(" << j << ")";
        break;
      case GroupLawKind::Multiplicative:
        // t = 1 + s, the unshifted coordinate.
        os << "t^-" << j << "*(dt)^(" << j << ")";
        break;
      default:
        throw UnsupportedKind(
            "the comparison map is available for the additive and "
            "multiplicative laws only");
    }
    out.push_back(os.str());
  }
  return out;
}

std::vector<std::string> delta_table(const Ring& R, const DeltaData& dd,
                                     const std::map<std::string, RElem>& bind) {
  Mat D = umat_reduce(R, dd.delta, bind);
  VarNamer namer1 = coordinate_namer(dd.w1.ctx, dd.shape.law.coordinate);
  std::vector<std::string> out;
  for (int j = 0; j < D.cols; ++j) {
    std::vector<RElem> col = D.col(j);
    std::ostringstream os;
    os << "delta(" << mono_str(dd.w1.ctx, dd.w1.basis[static_cast<size_t>(j)], namer1)
       << ") = "
       << render_over_basis(R, col, dd.w2.ctx, dd.w2.basis,
                            dd.shape.law.coordinate);
    out.push_back(os.str());
  }
  return out;
}

std::vector<std::string> render_form_rows(const Ring& R, const DeltaData& dd,
                                          const Mat& rows) {
  std::vector<std::string> out;
  for (int i = 0; i < rows.rows; ++i)
    out.push_back(render_over_basis(R, rows.row(i), dd.w1.ctx, dd.w1.basis,
                                    dd.shape.law.coordinate));
  return out;
}

}  // namespace pdcalc
