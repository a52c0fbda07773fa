#include "pdcalc/bl_complex.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace pdcalc {

namespace {

// The group law F evaluated on slot variables sa and sb of dst, as a
// divided-power element (the law's coefficients are plain-polynomial ones).
PdElt law_F_elt(const PdCtx& dst, const GroupLaw& law, int sa, int sb) {
  PlainPoly plain;
  for (const auto& [e, u] : law.F.c) {
    if (e[0] + e[1] > dst.trunc) continue;
    std::vector<int> key(static_cast<size_t>(dst.r) * dst.n, 0);
    key[static_cast<size_t>(sa)] = e[0];
    key[static_cast<size_t>(sb)] = e[1];
    plain[key] = u;
  }
  return pd_from_plain(dst, plain);
}

// d_i^* over explicit source/destination contexts (dst.r == src.r + 1); the
// linearized complex reuses this with its own shifted contexts.
PdElt coface_core(const SimplicialShape& shape, const PdCtx& src,
                  const PdCtx& dst, int i, const PdElt& x) {
  const int r = src.r;
  const int n = src.n;
  if (i < 0 || i > r + 1) throw CalcError("coface index out of range");
  PdSubst sub;
  sub.src = src;
  sub.dst = dst;
  sub.slot_image.resize(static_cast<size_t>(r) * static_cast<size_t>(n));
  auto img = [&](int s, int v) -> PdElt& {
    return sub.slot_image[static_cast<size_t>(s) * static_cast<size_t>(n) +
                          static_cast<size_t>(v)];
  };
  for (int s = 0; s < r; ++s) {
    for (int v = 0; v < n; ++v) {
      if (i == 0) {
        img(s, v) = elt_slot_var(dst, s + 1, v);
      } else if (i <= r) {
        if (s < i - 1) {
          img(s, v) = elt_slot_var(dst, s, v);
        } else if (s == i - 1) {
          if (shape.kind == ShapeKind::Product) {
            img(s, v) = elt_add(dst, elt_slot_var(dst, i - 1, v),
                                elt_slot_var(dst, i, v));
          } else {
            img(s, v) = law_F_elt(dst, shape.law, i - 1, i);
          }
        } else {
          img(s, v) = elt_slot_var(dst, s + 1, v);
        }
      } else {
        img(s, v) = elt_slot_var(dst, s, v);
      }
    }
  }
  if (src.with_coeff_vars) {
    sub.coeff_image.resize(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
      if (i == 0) {
        sub.coeff_image[static_cast<size_t>(v)] =
            elt_add(dst, elt_coeff_var(dst, v), elt_slot_var(dst, 0, v));
      } else {
        sub.coeff_image[static_cast<size_t>(v)] = elt_coeff_var(dst, v);
      }
    }
  }
  return pd_substitute(sub, x);
}

LevelBasis make_basis(PdCtx ctx, std::vector<PdMono> monos) {
  LevelBasis b;
  b.ctx = std::move(ctx);
  b.monos = std::move(monos);
  b.fil.reserve(b.monos.size());
  for (size_t i = 0; i < b.monos.size(); ++i) {
    b.index[b.monos[i]] = static_cast<int>(i);
    b.fil.push_back(b.monos[i].fil());
  }
  return b;
}

// sum_i (-1)^i d_i^*: P(r) -> P(r+1), before any projection.
PdElt alternating_coface(const SimplicialShape& shape, const BlContext& bc,
                         int r, const PdElt& x) {
  PdCtx dst = level_ctx(shape, bc, r + 1);
  PdElt acc = elt_zero(dst);
  for (int i = 0; i <= r + 1; ++i) {
    PdElt term = coface_apply(shape, bc, r, i, x);
    acc = (i % 2 == 0) ? elt_add(dst, acc, term) : elt_sub(dst, acc, term);
  }
  return acc;
}

// Relation sources of the degree-r level (r >= 2): alternating coface images
// of the one-slot elements of slot degree above the cap, pushed through all
// cofaces until they live in r slots. Elements of slot degree beyond r*p^m
// are skipped: every monomial of their propagation overflows some slot and
// projects to zero.
std::vector<PdElt> relation_raws(const SimplicialShape& shape,
                                 const BlContext& bc, int r) {
  std::vector<PdElt> cur;
  if (r < 2) return cur;
  const long pm = bc.pl.pm;
  PdCtx c1 = level_ctx(shape, bc, 1);
  const int top = static_cast<int>(std::min<long>(pm * r, bc.trunc));
  for (const auto& mo : enumerate_monomials(c1, top, true, -1)) {
    bool t_free = true;
    for (int tv : mo.t) {
      if (tv) {
        t_free = false;
        break;
      }
    }
    if (!t_free) continue;
    if (mo.fil() <= pm) continue;
    cur.push_back(
        alternating_coface(shape, bc, 1, elt_mono(c1, mo, Universal::one())));
  }
  for (int lvl = 2; lvl < r; ++lvl) {
    std::vector<PdElt> next;
    next.reserve(cur.size() * static_cast<size_t>(lvl + 2));
    for (const auto& e : cur) {
      for (int j = 0; j <= lvl + 1; ++j) {
        next.push_back(coface_apply(shape, bc, lvl, j, e));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

// Project onto the capped normalized ambient basis: monomials with an empty
// slot (degenerate) or an overflowing slot map to zero.
std::vector<Universal> project_to(const OmegaPresentation& pres,
                                  const PdElt& y) {
  std::vector<Universal> col(pres.basis.size(), Universal::zero());
  const PdCtx& ctx = pres.ctx;
  const int cap = static_cast<int>(ctx.pl.pm);
  for (const auto& [mo, u] : y.c) {
    if (!mo.all_slots_positive(ctx.r, ctx.n)) continue;
    if (mo.exceeds_slot_cap(ctx.r, ctx.n, cap)) continue;
    auto it = pres.index.find(mo);
    if (it == pres.index.end())
      throw CalcError("internal: projected monomial escapes the ambient basis");
    col[static_cast<size_t>(it->second)] += u;
  }
  return col;
}

bool col_is_zero(const std::vector<Universal>& col) {
  for (const auto& u : col) {
    if (!u.is_zero()) return false;
  }
  return true;
}

UMat umat_from_cols(long rows, const std::vector<std::vector<Universal>>& cols) {
  UMat M = UMat::zero(rows, static_cast<long>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) {
    for (long i = 0; i < rows; ++i) {
      M.at(i, static_cast<long>(j)) = cols[j][static_cast<size_t>(i)];
    }
  }
  return M;
}

// Basis monomial test for L(Omega^r): slot 1 is unrestricted, the form slots
// must be nonempty and within the cap.
bool linearized_mono_ok(const PdCtx& ctx, const PdMono& mo) {
  const int cap = static_cast<int>(ctx.pl.pm);
  for (int s = 1; s < ctx.r; ++s) {
    const int d = mo.slot_degree(s, ctx.n);
    if (d < 1 || d > cap) return false;
  }
  return true;
}

std::vector<Universal> project_linearized(const LinearizedLevel& L,
                                          const PdElt& y) {
  std::vector<Universal> col(L.basis.size(), Universal::zero());
  for (const auto& [mo, u] : y.c) {
    if (!linearized_mono_ok(L.ctx, mo)) continue;
    auto it = L.index.find(mo);
    if (it == L.index.end())
      throw CalcError("internal: projected monomial escapes the ambient basis");
    col[static_cast<size_t>(it->second)] += u;
  }
  return col;
}

}  // namespace

SimplicialShape product_shape() {
  SimplicialShape s;
  s.kind = ShapeKind::Product;
  return s;
}

SimplicialShape group_shape(const GroupLaw& law) {
  SimplicialShape s;
  s.kind = ShapeKind::Group;
  s.law = law;
  return s;
}

PdCtx level_ctx(const SimplicialShape& shape, const BlContext& bc, int r) {
  if (shape.kind == ShapeKind::Group && bc.n != 1)
    throw UnsupportedKind("group shape requires a single coordinate");
  return make_pd_ctx(bc.pl, bc.n, r, bc.trunc,
                     shape.kind == ShapeKind::Product);
}

PdElt coface_apply(const SimplicialShape& shape, const BlContext& bc, int r,
                   int i, const PdElt& x) {
  if (shape.kind == ShapeKind::Group && shape.law.trunc < bc.trunc)
    throw TruncationTooSmall(
        "group law precision is below the context truncation");
  PdCtx src = level_ctx(shape, bc, r);
  PdCtx dst = level_ctx(shape, bc, r + 1);
  return coface_core(shape, src, dst, i, x);
}

PdElt codegeneracy_apply(const SimplicialShape& shape, const BlContext& bc,
                         int r, int i, const PdElt& x) {
  if (i < 0 || i > r) throw CalcError("codegeneracy index out of range");
  PdCtx src = level_ctx(shape, bc, r + 1);
  PdCtx dst = level_ctx(shape, bc, r);
  const int n = bc.n;
  PdSubst sub;
  sub.src = src;
  sub.dst = dst;
  sub.slot_image.resize(static_cast<size_t>(r + 1) * static_cast<size_t>(n));
  for (int s = 0; s <= r; ++s) {
    for (int v = 0; v < n; ++v) {
      PdElt image;
      if (s < i) {
        image = elt_slot_var(dst, s, v);
      } else if (s == i) {
        image = elt_zero(dst);
      } else {
        image = elt_slot_var(dst, s - 1, v);
      }
      sub.slot_image[static_cast<size_t>(s) * static_cast<size_t>(n) +
                     static_cast<size_t>(v)] = std::move(image);
    }
  }
  if (src.with_coeff_vars) {
    sub.coeff_image.resize(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v)
      sub.coeff_image[static_cast<size_t>(v)] = elt_coeff_var(dst, v);
  }
  return pd_substitute(sub, x);
}

bool check_cosimplicial_identities(const SimplicialShape& shape,
                                   const BlContext& bc, int r, int deg_cap) {
  PdCtx ctx = level_ctx(shape, bc, r);
  const int cap = std::min(deg_cap, bc.trunc);
  for (const auto& mo : enumerate_monomials(ctx, cap, false, -1)) {
    PdElt x = elt_mono(ctx, mo, Universal::one());
    std::vector<PdElt> dx;
    dx.reserve(static_cast<size_t>(r) + 2);
    for (int i = 0; i <= r + 1; ++i)
      dx.push_back(coface_apply(shape, bc, r, i, x));
    for (int i = 0; i <= r + 1; ++i) {
      for (int j = i + 1; j <= r + 2; ++j) {
        PdElt lhs =
            coface_apply(shape, bc, r + 1, j, dx[static_cast<size_t>(i)]);
        PdElt rhs =
            coface_apply(shape, bc, r + 1, i, dx[static_cast<size_t>(j - 1)]);
        if (!(lhs == rhs)) return false;
      }
    }
  }
  return true;
}

UMat UMat::zero(long rows, long cols) {
  UMat M;
  M.rows = rows;
  M.cols = cols;
  M.a.assign(static_cast<size_t>(rows) * static_cast<size_t>(cols),
             Universal::zero());
  return M;
}

Mat umat_reduce(const Ring& R, const UMat& M,
                const std::map<std::string, RElem>& extra_bind) {
  std::map<std::string, RElem> bind = extra_bind;
  if ((R.kind == RingKind::PolyOverPrimeField ||
       R.kind == RingKind::RationalFunctions) &&
      !bind.count(R.param)) {
    if (R.kind == RingKind::PolyOverPrimeField) {
      bind[R.param] = RElem{FpPoly::var(R.p)};
    } else {
      bind[R.param] =
          RElem{rat_make(FpPoly::var(R.p), FpPoly::constant(R.p, 1))};
    }
  }
  Mat out =
      Mat::zero(R, static_cast<int>(M.rows), static_cast<int>(M.cols));
  for (long i = 0; i < M.rows; ++i) {
    for (long j = 0; j < M.cols; ++j) {
      out.at(static_cast<int>(i), static_cast<int>(j)) =
          reduce_universal(R, M.at(i, j), bind);
    }
  }
  return out;
}

LevelBasis build_P(const SimplicialShape& shape, const BlContext& bc, int r) {
  PdCtx ctx = level_ctx(shape, bc, r);
  auto monos = enumerate_monomials(ctx, bc.trunc, false, -1);
  return make_basis(std::move(ctx), std::move(monos));
}

LevelBasis normalized_basis(const SimplicialShape& shape, const BlContext& bc,
                            int r) {
  PdCtx ctx = level_ctx(shape, bc, r);
  auto monos = enumerate_monomials(ctx, bc.trunc, true, -1);
  return make_basis(std::move(ctx), std::move(monos));
}

OmegaPresentation omega_presentation(const SimplicialShape& shape,
                                     const BlContext& bc, int r) {
  const long pm = bc.pl.pm;
  if (static_cast<long>(bc.trunc) < pm * r)
    throw TruncationTooSmall("level " + std::to_string(r) +
                             " presentation needs truncation >= r * p^m");
  OmegaPresentation pres;
  pres.ctx = level_ctx(shape, bc, r);
  pres.basis =
      enumerate_monomials(pres.ctx, bc.trunc, true, static_cast<int>(pm));
  for (size_t i = 0; i < pres.basis.size(); ++i) {
    pres.index[pres.basis[i]] = static_cast<int>(i);
    pres.fil.push_back(pres.basis[i].fil());
  }

  std::vector<PdElt> raws = relation_raws(shape, bc, r);
  std::vector<PdElt> lifted;
  if (pres.ctx.with_coeff_vars) {
    // over the coordinate ring every coefficient-monomial multiple of a
    // relation is again a relation
    PdCtx c0 = make_pd_ctx(bc.pl, bc.n, 0, bc.trunc, true);
    auto tmonos = enumerate_monomials(c0, bc.trunc, false, -1);
    lifted.reserve(raws.size() * tmonos.size());
    for (const auto& raw : raws) {
      for (const auto& tm : tmonos) {
        PdMono lift;
        lift.t = tm.t;
        lift.e.assign(
            static_cast<size_t>(pres.ctx.r) * static_cast<size_t>(pres.ctx.n),
            0);
        lifted.push_back(elt_mul(pres.ctx,
                                 elt_mono(pres.ctx, lift, Universal::one()),
                                 raw));
      }
    }
  } else {
    lifted = std::move(raws);
  }

  std::vector<std::vector<Universal>> cols;
  for (const auto& e : lifted) {
    auto col = project_to(pres, e);
    if (!col_is_zero(col)) cols.push_back(std::move(col));
  }
  pres.relations =
      umat_from_cols(static_cast<long>(pres.basis.size()), cols);
  return pres;
}

UMat bl_differential(const SimplicialShape& shape, const BlContext& bc,
                     int r) {
  OmegaPresentation cod = omega_presentation(shape, bc, r + 1);
  if (r == 0 && shape.kind == ShapeKind::Group) {
    // the degree-0 level is the base ring; both cofaces restrict to the
    // identity there, so the alternating sum vanishes
    return UMat::zero(static_cast<long>(cod.basis.size()), 1);
  }
  OmegaPresentation dom =
      (r == 0) ? derham_level(bc, 0) : omega_presentation(shape, bc, r);
  UMat M = UMat::zero(static_cast<long>(cod.basis.size()),
                      static_cast<long>(dom.basis.size()));
  for (size_t c = 0; c < dom.basis.size(); ++c) {
    PdElt x = elt_mono(dom.ctx, dom.basis[c], Universal::one());
    PdElt y = alternating_coface(shape, bc, r, x);
    auto col = project_to(cod, y);
    for (size_t i = 0; i < col.size(); ++i)
      M.at(static_cast<long>(i), static_cast<long>(c)) = col[i];
  }
  return M;
}

Mat hodge_fil_rows(const Ring& R, const std::vector<int>& fil, int k) {
  const int dim = static_cast<int>(fil.size());
  std::vector<std::vector<RElem>> rows;
  for (int i = 0; i < dim; ++i) {
    if (fil[static_cast<size_t>(i)] >= k) {
      std::vector<RElem> row(static_cast<size_t>(dim), r_zero(R));
      row[static_cast<size_t>(i)] = r_one(R);
      rows.push_back(std::move(row));
    }
  }
  return mat_from_rows(R, rows, dim);
}

LinearizedLevel linearized_level(const BlContext& bc, int r) {
  const long pm = bc.pl.pm;
  if (static_cast<long>(bc.trunc) < pm * r)
    throw TruncationTooSmall("linearized level " + std::to_string(r) +
                             " needs truncation >= r * p^m");
  LinearizedLevel L;
  L.ctx = make_pd_ctx(bc.pl, bc.n, r + 1, bc.trunc, false);
  for (const auto& mo : enumerate_monomials(L.ctx, bc.trunc, false, -1)) {
    if (linearized_mono_ok(L.ctx, mo)) L.basis.push_back(mo);
  }
  for (size_t i = 0; i < L.basis.size(); ++i) {
    L.index[L.basis[i]] = static_cast<int>(i);
    L.fil.push_back(L.basis[i].fil());
  }

  // relations: the degree-r form relations, shifted into the form slots and
  // multiplied by every monomial of the unrestricted first slot
  std::vector<PdElt> raws = relation_raws(product_shape(), bc, r);
  std::vector<std::vector<Universal>> cols;
  if (!raws.empty()) {
    PdCtx slot_ctx = make_pd_ctx(bc.pl, bc.n, 1, bc.trunc, false);
    auto slot0 = enumerate_monomials(slot_ctx, bc.trunc, false, -1);
    for (const auto& raw : raws) {
      PdElt shifted;
      for (const auto& [mo, u] : raw.c) {
        for (int tv : mo.t) {
          if (tv)
            throw CalcError("internal: coefficient variable in form relation");
        }
        PdMono mm;
        mm.e.assign(
            static_cast<size_t>(L.ctx.r) * static_cast<size_t>(L.ctx.n), 0);
        for (int s = 0; s < r; ++s) {
          for (int v = 0; v < bc.n; ++v) {
            mm.e[static_cast<size_t>(s + 1) * static_cast<size_t>(bc.n) +
                 static_cast<size_t>(v)] =
                mo.e[static_cast<size_t>(s) * static_cast<size_t>(bc.n) +
                     static_cast<size_t>(v)];
          }
        }
        shifted.c[mm] = u;
      }
      for (const auto& g : slot0) {
        PdMono lead;
        lead.e.assign(
            static_cast<size_t>(L.ctx.r) * static_cast<size_t>(L.ctx.n), 0);
        for (int v = 0; v < bc.n; ++v)
          lead.e[static_cast<size_t>(v)] = g.e[static_cast<size_t>(v)];
        PdElt prod = elt_mul(L.ctx, elt_mono(L.ctx, lead, Universal::one()),
                             shifted);
        auto col = project_linearized(L, prod);
        if (!col_is_zero(col)) cols.push_back(std::move(col));
      }
    }
  }
  L.relations = umat_from_cols(static_cast<long>(L.basis.size()), cols);
  return L;
}

UMat linearized_differential(const BlContext& bc, int r) {
  LinearizedLevel dom = linearized_level(bc, r);
  LinearizedLevel cod = linearized_level(bc, r + 1);
  SimplicialShape prod = product_shape();
  UMat M = UMat::zero(static_cast<long>(cod.basis.size()),
                      static_cast<long>(dom.basis.size()));
  for (size_t c = 0; c < dom.basis.size(); ++c) {
    PdElt x = elt_mono(dom.ctx, dom.basis[c], Universal::one());
    PdElt acc = elt_zero(cod.ctx);
    for (int j = 1; j <= r + 2; ++j) {
      PdElt term = coface_core(prod, dom.ctx, cod.ctx, j, x);
      acc = (j % 2 == 1) ? elt_add(cod.ctx, acc, term)
                         : elt_sub(cod.ctx, acc, term);
    }
    auto col = project_linearized(cod, acc);
    for (size_t i = 0; i < col.size(); ++i)
      M.at(static_cast<long>(i), static_cast<long>(c)) = col[i];
  }
  return M;
}

OmegaPresentation derham_level(const BlContext& bc, int r) {
  if (r == 0) {
    OmegaPresentation pres;
    pres.ctx = make_pd_ctx(bc.pl, bc.n, 0, bc.trunc, true);
    pres.basis = enumerate_monomials(pres.ctx, bc.trunc, false, -1);
    for (size_t i = 0; i < pres.basis.size(); ++i) {
      pres.index[pres.basis[i]] = static_cast<int>(i);
      pres.fil.push_back(pres.basis[i].fil());
    }
    pres.relations = UMat::zero(static_cast<long>(pres.basis.size()), 0);
    return pres;
  }
  return omega_presentation(product_shape(), bc, r);
}

UMat derham_differential(const BlContext& bc, int r) {
  return bl_differential(product_shape(), bc, r);
}

TransversalityReport transversality_check(const Ring& R,
                                          const LinearizedLevel& L,
                                          const std::vector<Mat>& fil_spans,
                                          bool zero_ideal) {
  TransversalityReport rep;
  if (zero_ideal) {
    // the zero ideal has zero positive powers; both sides of the condition
    // collapse and every filtration is transversal
    rep.transversal = true;
    rep.almost_transversal = true;
    return rep;
  }
  const PdCtx& ctx = L.ctx;
  const int dim = static_cast<int>(L.basis.size());
  const int band = ctx.trunc - static_cast<int>(ctx.pl.pm);
  if (static_cast<int>(fil_spans.size()) < band + 1)
    throw CalcError("filtration spans must cover degrees 0.." +
                    std::to_string(band));

  // keep only rows supported inside the faithful degree band
  auto band_rows = [&](const Mat& A) {
    std::vector<std::vector<RElem>> keep;
    for (int i = 0; i < A.rows; ++i) {
      bool ok = true;
      for (int j = 0; j < A.cols; ++j) {
        if (!r_is_zero(R, A.at(i, j)) && L.fil[static_cast<size_t>(j)] > band) {
          ok = false;
          break;
        }
      }
      if (ok) keep.push_back(A.row(i));
    }
    return mat_from_rows(R, keep, dim);
  };

  const Mat rel = band_rows(mat_transpose(umat_reduce(R, L.relations)));

  auto ideal_module_rows = [&](int i) {
    std::vector<std::vector<RElem>> rows;
    for (int b = 0; b < dim; ++b) {
      if (L.basis[static_cast<size_t>(b)].slot_degree(0, ctx.n) >= i &&
          L.fil[static_cast<size_t>(b)] <= band) {
        std::vector<RElem> row(static_cast<size_t>(dim), r_zero(R));
        row[static_cast<size_t>(b)] = r_one(R);
        rows.push_back(std::move(row));
      }
    }
    return mat_from_rows(R, rows, dim);
  };

  // multiply a first-slot scaled monomial onto a row vector
  auto mul_mono_row = [&](const PdMono& g, const std::vector<RElem>& w) {
    std::vector<RElem> out(static_cast<size_t>(dim), r_zero(R));
    for (int b = 0; b < dim; ++b) {
      if (r_is_zero(R, w[static_cast<size_t>(b)])) continue;
      PdMono prod = L.basis[static_cast<size_t>(b)];
      mpz_class cf = 1;
      for (int v = 0; v < ctx.n; ++v) {
        const int av = g.e[static_cast<size_t>(v)];
        if (!av) continue;
        const int bv = prod.e[static_cast<size_t>(v)];
        prod.e[static_cast<size_t>(v)] = av + bv;
        cf *= pd_mul_coeff(ctx.pl, av, bv);
      }
      if (prod.total() > ctx.trunc) continue;
      auto it = L.index.find(prod);
      if (it == L.index.end()) continue;
      const size_t o = static_cast<size_t>(it->second);
      out[o] = r_add(R, out[o],
                     r_mul(R, w[static_cast<size_t>(b)], r_from_int(R, cf)));
    }
    return out;
  };

  PdCtx slot_ctx = make_pd_ctx(ctx.pl, ctx.n, 1, ctx.trunc, false);
  std::vector<PdMono> slot0;
  for (const auto& g : enumerate_monomials(slot_ctx, band, false, -1)) {
    if (g.total() >= 1) slot0.push_back(g);
  }

  const Mat I1M = span_canon(mat_vstack(ideal_module_rows(1), rel));

  rep.transversal = true;
  rep.almost_transversal = true;
  auto row_text = [&](const std::vector<RElem>& v) {
    VarNamer nm = default_namer(ctx);
    std::string s;
    for (int b = 0; b < dim; ++b) {
      if (r_is_zero(R, v[static_cast<size_t>(b)])) continue;
      if (!s.empty()) s += " + ";
      const std::string cs = r_str(R, v[static_cast<size_t>(b)]);
      const std::string ms = mono_str(ctx, L.basis[static_cast<size_t>(b)], nm);
      if (ms == "1") {
        s += cs;
      } else if (cs == "1") {
        s += ms;
      } else {
        s += cs + "*" + ms;
      }
    }
    return s.empty() ? std::string("0") : s;
  };

  for (int k = 1; k <= band; ++k) {
    const Mat filk = band_rows(fil_spans[static_cast<size_t>(k)]);
    const Mat lhs = span_intersect(I1M, span_canon(mat_vstack(filk, rel)));

    std::vector<std::vector<RElem>> prods;
    for (int i = 1; i <= k; ++i) {
      const Mat filj = band_rows(fil_spans[static_cast<size_t>(k - i)]);
      for (const auto& g : slot0) {
        if (g.total() < i) continue;
        for (int w = 0; w < filj.rows; ++w) {
          auto pr = mul_mono_row(g, filj.row(w));
          bool nonzero = false;
          bool in_band = true;
          for (int b = 0; b < dim; ++b) {
            if (r_is_zero(R, pr[static_cast<size_t>(b)])) continue;
            nonzero = true;
            if (L.fil[static_cast<size_t>(b)] > band) {
              in_band = false;
              break;
            }
          }
          if (nonzero && in_band) prods.push_back(std::move(pr));
        }
      }
    }
    const Mat rhs =
        span_canon(mat_vstack(mat_from_rows(R, prods, dim), rel));

    if (!span_contains(rhs, lhs)) {
      rep.almost_transversal = false;
      rep.transversal = false;
      rep.failing_k = k;
      for (int i = 0; i < lhs.rows; ++i) {
        if (!span_member(rhs, lhs.row(i))) {
          rep.witness = lhs.row(i);
          rep.witness_text = row_text(rep.witness);
          break;
        }
      }
      return rep;
    }
    if (rep.transversal && !span_contains(lhs, rhs)) {
      rep.transversal = false;
      rep.failing_k = k;
      for (int i = 0; i < rhs.rows; ++i) {
        if (!span_member(lhs, rhs.row(i))) {
          rep.witness = rhs.row(i);
          rep.witness_text = row_text(rep.witness);
          break;
        }
      }
    }
  }
  return rep;
}

}  // namespace pdcalc
