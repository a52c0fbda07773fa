#include "pdcalc/poincare.hpp"

#include <sstream>
#include <utility>

namespace pdcalc {

namespace {

PdMono zero_mono(const PdCtx& ctx) {
  PdMono mo;
  mo.e.assign(static_cast<size_t>(ctx.r * ctx.n), 0);
  if (ctx.with_coeff_vars) mo.t.assign(static_cast<size_t>(ctx.n), 0);
  return mo;
}

LinearizedLevel from_presentation(OmegaPresentation p) {
  LinearizedLevel L;
  L.ctx = std::move(p.ctx);
  L.basis = std::move(p.basis);
  L.index = std::move(p.index);
  L.fil = std::move(p.fil);
  L.relations = std::move(p.relations);
  return L;
}

std::string render_row(const Ring& R, const std::vector<RElem>& v,
                       const LinearizedLevel& L) {
  VarNamer namer = default_namer(L.ctx);
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < v.size(); ++i) {
    if (r_is_zero(R, v[i])) continue;
    if (!first) os << " + ";
    first = false;
    std::string cs = r_str(R, v[i]);
    if (cs == "1")
      os << mono_str(L.ctx, L.basis[i], namer);
    else
      os << cs << "*" << mono_str(L.ctx, L.basis[i], namer);
  }
  if (first) os << "0";
  return os.str();
}

Mat relation_rows(const Ring& R, const LinearizedLevel& L) {
  if (L.relations.cols == 0)
    return Mat::zero(R, 0, static_cast<int>(L.basis.size()));
  return mat_transpose(umat_reduce(R, L.relations));
}

}  // namespace

PoincareComplex build_linearized(const PrimeLevel& pl, int n, int D) {
  if (D < 2 * pl.pm)
    throw TruncationTooSmall(
        "the three-term linearized complex needs D >= 2*p^m so the "
        "degree-two level is complete");
  BlContext bc{pl, n, D};
  PoincareComplex c;
  c.pl = pl;
  c.n = n;
  c.D = D;
  c.linearized = true;
  c.levels.push_back(linearized_level(bc, 0));
  c.levels.push_back(linearized_level(bc, 1));
  c.levels.push_back(linearized_level(bc, 2));
  c.d0 = linearized_differential(bc, 0);
  c.d1 = linearized_differential(bc, 1);
  return c;
}

PoincareComplex build_derham(const PrimeLevel& pl, int n, int D) {
  if (D < 2 * pl.pm)
    throw TruncationTooSmall(
        "the three-term coordinate complex needs D >= 2*p^m so the "
        "degree-two level is complete");
  BlContext bc{pl, n, D};
  PoincareComplex c;
  c.pl = pl;
  c.n = n;
  c.D = D;
  c.linearized = false;
  c.levels.push_back(from_presentation(derham_level(bc, 0)));
  c.levels.push_back(from_presentation(derham_level(bc, 1)));
  c.levels.push_back(from_presentation(derham_level(bc, 2)));
  c.d0 = derham_differential(bc, 0);
  c.d1 = derham_differential(bc, 1);
  return c;
}

int safe_band(const PoincareComplex& c) {
  return c.D - 2 * static_cast<int>(c.pl.pm);
}

ExactnessCheck check_exactness(const Ring& R, const PoincareComplex& c,
                               int k, int position) {
  if (k < 0 || k > safe_band(c))
    throw BandViolation(
        "filtration index outside the truncation-safe band [0, D - 2*p^m]");
  if (position != 0 && position != 1)
    throw CalcError("exactness positions 0 and 1 are supported");

  const LinearizedLevel& dom = c.levels[static_cast<size_t>(position)];
  const LinearizedLevel& cod = c.levels[static_cast<size_t>(position) + 1];
  const UMat& dmat = (position == 0) ? c.d0 : c.d1;

  // Cycles inside Fil^k: solve d(x) + relations * w = 0 over the Fil^k
  // coordinates, then push the x-part back into the ambient basis.
  Mat F = hodge_fil_rows(R, dom.fil, k);
  Mat Dm = umat_reduce(R, dmat);
  Mat M = mat_mul(Dm, mat_transpose(F));
  Mat A = M;
  if (cod.relations.cols > 0)
    A = mat_hstack(M, umat_reduce(R, cod.relations));
  Mat Kf = kernel_rows(A);
  Mat X = Mat::zero(R, Kf.rows, F.rows);
  for (int i = 0; i < Kf.rows; ++i)
    for (int j = 0; j < F.rows; ++j) X.at(i, j) = Kf.at(i, j);
  Mat cycles = mat_mul(X, F);

  // Boundaries: the augmentation image at position 0 (constants at k <= 0,
  // nothing above), d0 of the filtered degree-zero level at position 1.
  int amb = static_cast<int>(dom.basis.size());
  Mat bounds = Mat::zero(R, 0, amb);
  if (position == 0) {
    if (k <= 0) {
      auto it = dom.index.find(zero_mono(dom.ctx));
      if (it == dom.index.end())
        throw CalcError("internal: the constant monomial left the basis");
      bounds = Mat::zero(R, 1, amb);
      bounds.at(0, it->second) = r_one(R);
    }
  } else {
    Mat F0 = hodge_fil_rows(R, c.levels[0].fil, k);
    Mat D0 = umat_reduce(R, c.d0);
    bounds = mat_transpose(mat_mul(D0, mat_transpose(F0)));
  }

  Mat rel_dom = relation_rows(R, dom);
  Mat cyc_sat = span_canon(mat_vstack(cycles, rel_dom));
  Mat bd_sat = span_canon(mat_vstack(bounds, rel_dom));
  if (!span_contains(cyc_sat, bd_sat))
    throw CalcError("internal: boundaries are not cycles");

  ExactnessCheck out;
  out.k = k;
  out.position = position;
  out.kernel_length = span_length(cyc_sat);
  out.image_length = span_length(bd_sat);
  out.homology_length = out.kernel_length - out.image_length;
  out.exact = out.homology_length == 0;
  if (!out.exact) {
    for (int i = 0; i < cyc_sat.rows; ++i) {
      if (!span_member(bd_sat, cyc_sat.row(i))) {
        out.witness = render_row(R, cyc_sat.row(i), dom);
        break;
      }
    }
  }
  return out;
}

ExactnessReport check_band(const Ring& R, const PoincareComplex& c) {
  ExactnessReport rep;
  rep.band = safe_band(c);
  for (int k = 0; k <= rep.band; ++k) {
    for (int pos : {0, 1}) {
      ExactnessCheck chk = check_exactness(R, c, k, pos);
      rep.all_exact = rep.all_exact && chk.exact;
      rep.checks.push_back(std::move(chk));
    }
  }
  return rep;
}

std::vector<Mat> hodge_filtration(const Ring& R, const PoincareComplex& c) {
  int kmax = c.D - static_cast<int>(c.pl.pm);
  std::vector<Mat> spans;
  spans.reserve(static_cast<size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k)
    spans.push_back(hodge_fil_rows(R, c.levels[1].fil, k));
  return spans;
}

}  // namespace pdcalc
