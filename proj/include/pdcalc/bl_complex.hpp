#pragma once

// Cosimplicial level-m divided-power algebras over two simplicial shapes —
// the product (de Rham) shape on affine n-space and the group (conormal)
// shape attached to a formal group law — together with normalization, the
// quotient presentations of the differential-form levels, the alternating
// coface differential, the Hodge filtration, the linearized complex, and the
// transversality check of module filtrations against the divided-power ideal
// filtration.
//
// Every construction is first carried out over Universal coefficients
// (rationals with named parameters) and reduced to a concrete ring
// afterwards.

#include <map>
#include <string>
#include <vector>

#include "pdcalc/arith.hpp"
#include "pdcalc/formal_group.hpp"
#include "pdcalc/linalg.hpp"
#include "pdcalc/mpd.hpp"

namespace pdcalc {

// ----------------------------------------------------------------------------
// Shapes and contexts.
// ----------------------------------------------------------------------------

enum class ShapeKind {
  // X^prod(r) = X^{r+1} over affine n-space; carries coordinate variables.
  Product,
  // Nerve of a one-dimensional formal group; inner cofaces multiply
  // adjacent entries through the group law.
  Group,
};

struct SimplicialShape {
  ShapeKind kind = ShapeKind::Product;
  GroupLaw law;  // group shape only
};

SimplicialShape product_shape();
SimplicialShape group_shape(const GroupLaw& law);

struct BlContext {
  PrimeLevel pl;
  int n = 1;      // coordinates (must be 1 for the group shape)
  int trunc = 0;  // total-degree truncation D
};

// The r-slot algebra context of the shape (the product shape carries
// coordinate variables, the group shape does not).
PdCtx level_ctx(const SimplicialShape& shape, const BlContext& bc, int r);

// ----------------------------------------------------------------------------
// Cofaces and codegeneracies.
// ----------------------------------------------------------------------------

// d_i^*: P(r) -> P(r+1), 0 <= i <= r+1.
PdElt coface_apply(const SimplicialShape& shape, const BlContext& bc, int r,
                   int i, const PdElt& x);

// s_i^*: P(r+1) -> P(r), 0 <= i <= r (kills slot i+1).
PdElt codegeneracy_apply(const SimplicialShape& shape, const BlContext& bc,
                         int r, int i, const PdElt& x);

// Verify d_j^* d_i^* = d_i^* d_{j-1}^* (i < j) on every P(r) basis monomial
// of total degree <= deg_cap.
bool check_cosimplicial_identities(const SimplicialShape& shape,
                                   const BlContext& bc, int r, int deg_cap);

// ----------------------------------------------------------------------------
// Universal matrices.
// ----------------------------------------------------------------------------

struct UMat {
  long rows = 0, cols = 0;
  std::vector<Universal> a;  // row-major

  static UMat zero(long rows, long cols);
  Universal& at(long i, long j) { return a[static_cast<size_t>(i * cols + j)]; }
  const Universal& at(long i, long j) const {
    return a[static_cast<size_t>(i * cols + j)];
  }
};

// Entrywise reduction into a concrete ring. The ring's own parameter (for
// polynomial/rational-function rings) binds to its variable automatically;
// extra_bind supplies values for any other parameters.
Mat umat_reduce(const Ring& R, const UMat& M,
                const std::map<std::string, RElem>& extra_bind = {});

// ----------------------------------------------------------------------------
// Bases and presentations.
// ----------------------------------------------------------------------------

struct LevelBasis {
  PdCtx ctx;
  std::vector<PdMono> monos;
  std::map<PdMono, int> index;
  std::vector<int> fil;  // slot-degree filtration of each basis monomial
};

// Full monomial basis of P(r) up to the truncation.
LevelBasis build_P(const SimplicialShape& shape, const BlContext& bc, int r);

// Normalized sub-basis: monomials with every slot of positive degree
// (the intersection of the codegeneracy kernels).
LevelBasis normalized_basis(const SimplicialShape& shape, const BlContext& bc,
                            int r);

// Presentation of the degree-r differential-form level: ambient basis =
// normalized monomials with every slot degree <= p^m, relation columns =
// projections of the coface propagations of d(one-slot overflow elements).
struct OmegaPresentation {
  PdCtx ctx;
  std::vector<PdMono> basis;
  std::map<PdMono, int> index;
  std::vector<int> fil;
  UMat relations;  // columns are relation vectors over the ambient basis
};

// Requires bc.trunc >= r * p^m.
OmegaPresentation omega_presentation(const SimplicialShape& shape,
                                     const BlContext& bc, int r);

// Alternating coface sum Omega^r -> Omega^{r+1} (or omega for the group
// shape) as an ambient matrix: columns indexed by the degree-r basis, rows by
// the degree-(r+1) basis.  r = 0 is the augmentation differential (zero map
// for the group shape; f(t + tau) - f(t) for the product shape).
UMat bl_differential(const SimplicialShape& shape, const BlContext& bc, int r);

// Rows of unit vectors spanning Fil^k of the presentation (monomials of
// filtration degree >= k), over a concrete ring.
Mat hodge_fil_rows(const Ring& R, const std::vector<int>& fil, int k);

// ----------------------------------------------------------------------------
// Linearized (coordinate-linear) complex L(Omega^r) and the de Rham levels.
// ----------------------------------------------------------------------------

// L(Omega^r): slot 1 carries the unrestricted divided-power part, slots
// 2..r+1 the form part (positive and capped at p^m); no coordinate
// variables appear because the shifted cofaces never touch them.
struct LinearizedLevel {
  PdCtx ctx;  // r+1 slots
  std::vector<PdMono> basis;
  std::map<PdMono, int> index;
  std::vector<int> fil;  // total slot degree (grading = filtration)
  UMat relations;
};

LinearizedLevel linearized_level(const BlContext& bc, int r);
// Shifted alternating coface sum L(Omega^r) -> L(Omega^{r+1}).
UMat linearized_differential(const BlContext& bc, int r);

// Non-linearized de Rham level with polynomial coefficients (product shape
// with coordinate variables); r = 0 is the coordinate ring itself.
OmegaPresentation derham_level(const BlContext& bc, int r);
UMat derham_differential(const BlContext& bc, int r);

// ----------------------------------------------------------------------------
// Transversality of a module filtration against the divided-power ideal
// filtration of the slot-1 part.
// ----------------------------------------------------------------------------

struct TransversalityReport {
  bool transversal = false;
  bool almost_transversal = false;
  int failing_k = -1;
  std::vector<RElem> witness;  // ambient coordinates; empty when passing
  std::string witness_text;
};

// fil_spans[k] holds generator rows of Fil^k over the ambient basis of L,
// for k = 0..kmax; comparisons are restricted to the degree band
// <= bc-trunc - p^m.  With zero_ideal the ideal filtration is identically
// zero in positive degrees (every filtration is transversal to it).
TransversalityReport transversality_check(const Ring& R,
                                          const LinearizedLevel& L,
                                          const std::vector<Mat>& fil_spans,
                                          bool zero_ideal = false);

}  // namespace pdcalc
