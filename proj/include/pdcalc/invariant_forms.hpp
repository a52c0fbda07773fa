#pragma once

// Closed invariant one-forms of a formal group at level m.
//
// The degree-one level of the group complex is free on z^(1), ..., z^(p^m);
// its alternating coface differential delta lands in the presented degree-two
// level.  A form is closed when its delta image falls into the span of the
// degree-two relation columns.  This module computes the kernel modulo
// relations over a concrete coefficient ring, its filtration pieces and
// invariant factors, membership tests (including a bounded symbolic-parameter
// search over Z/p^N), rank scans across finite-field fibers of a
// one-parameter family, and the comparison images of the generators inside
// the coordinate-ring complex.

#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "pdcalc/bl_complex.hpp"

namespace pdcalc {

// delta and the two presentations it connects, assembled once per law and
// truncation over universal coefficients; every query below reduces this
// data into its target ring.  Requires trunc >= 2*p^m (so the degree-two
// relations are complete) and law.trunc >= trunc.
struct DeltaData {
  SimplicialShape shape;
  BlContext bc;
  OmegaPresentation w1;  // free on the scaled powers z^(1) .. z^(p^m)
  OmegaPresentation w2;
  UMat delta;            // columns = delta images of the w1 basis
};

DeltaData build_delta(const GroupLaw& law, const PrimeLevel& pl, int trunc);

// Canonical generator rows (over the w1 basis) of the closed forms: vectors v
// with delta(v) inside the relation span.  `bind` fixes law parameters;
// the ring's own parameter (polynomial or rational-function variable) is
// bound automatically.  With use_relations = false the target is the plain
// ambient module of degree two (no relation columns), which underreports the
// kernel whenever a relation absorbs a differential.
Mat closed_form_rows(const Ring& R, const DeltaData& dd,
                     const std::map<std::string, RElem>& bind = {},
                     bool use_relations = true);

// Invariant factors of the module spanned by canonical rows: the nonzero
// diagonal of the Smith form over Z/p^N; over a field, one 1 per generator.
std::vector<mpz_class> span_invariant_factors(const Ring& R, const Mat& rows);

// Fil^k of the closed forms: the intersection of the kernel with the span of
// the basis elements of filtration degree >= k.  Requires 0 <= k <= p^m.
Mat fil_piece_rows(const Ring& R, const DeltaData& dd, int k,
                   const std::map<std::string, RElem>& bind = {},
                   bool use_relations = true);

struct Membership {
  bool closed = false;
  // Largest k with the candidate inside Fil^k of the free degree-one level:
  // the smallest filtration degree in its support (p^m for the zero vector).
  int fil_degree = -1;
};

// Candidate v is given by its coordinates over the w1 basis.
Membership membership_check(const Ring& R, const DeltaData& dd,
                            const std::vector<RElem>& v,
                            const std::map<std::string, RElem>& bind = {},
                            bool use_relations = true);

// Membership over Z/p^N with one law parameter kept symbolic: decides
// whether delta(v) lies in the relation span over (Z/p^N)[param], searching
// polynomial multipliers of degree <= deg_cap (flattened into one exact
// linear system over Z/p^N).  When the search fails, the filtration grading
// can still prove impossibility outright: if every relation column vanishes
// on all rows of filtration <= f and the defect is nonzero in filtration f,
// no multiplier of any degree reaches it.
struct SymbolicMembership {
  bool closed = false;
  bool obstruction_proven = false;  // meaningful only when closed is false
  int fil_degree = -1;
};

SymbolicMembership membership_check_symbolic(const Ring& R,
                                             const DeltaData& dd,
                                             const std::vector<Universal>& v,
                                             const std::string& param,
                                             int deg_cap);

// One fiber of a one-parameter family over a prime or Galois field.
struct ScanPoint {
  std::string lambda;
  int rank = 0;        // kernel rank against the presented degree-two level
  int naive_rank = 0;  // kernel rank against the plain ambient module
  bool supersingular = false;  // set by rank_scan: rank above the generic one
  std::vector<std::string> generators;  // rendered kernel generators
};

// lambda = 0 and lambda = 1 are the singular fibers of the curve family and
// raise PoleAtSpecialization.
ScanPoint scan_at(const DeltaData& dd, const Ring& field, const RElem& lambda);

struct ScanResult {
  long p = 0;
  int e = 1;
  int generic_rank = 0;  // kernel rank over F_p(param)
  std::vector<ScanPoint> points;
};

// Scan every fiber over F_{p^e} away from {0, 1}.  Requires a one-parameter
// law, an odd p (the chord construction divides by 2), and e <= 3.
ScanResult rank_scan(const DeltaData& dd, int e);

// Rendered images of z^(1) .. z^(p^m) under the comparison map into the
// coordinate-ring complex.  Additive law: (dt)^(j).  Multiplicative law:
// t^-j * (dt)^(j), with t = 1 + s the unshifted coordinate.  Curve laws are
// not supported and raise UnsupportedKind.
std::vector<std::string> nu_map_images(const GroupLaw& law,
                                       const PrimeLevel& pl);

// One line per degree-one generator: "delta(<gen>) = <image over R>".
std::vector<std::string> delta_table(const Ring& R, const DeltaData& dd,
                                     const std::map<std::string, RElem>& bind = {});

// Rendered canonical rows over the w1 basis (used by scan_at and the CLI).
std::vector<std::string> render_form_rows(const Ring& R, const DeltaData& dd,
                                          const Mat& rows);

}  // namespace pdcalc
