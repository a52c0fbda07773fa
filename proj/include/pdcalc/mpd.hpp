#pragma once

// Truncated monomial algebras with level-scaled powers.
//
// P(r) is spanned by monomials
//     t_1^{c_1} ... t_n^{c_n} * x_{(1,1)}^(e_11) ... x_{(r,n)}^(e_rn)
// where the t's (optional) are plain polynomial coefficient variables and
// x_{(s,v)}^(e) denotes the scaled power x^e / q(e)! of slot variable v in
// slot s. Everything is truncated at a fixed total degree; coefficients live
// in the universal ring Q[params].

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pdcalc/arith.hpp"

namespace pdcalc {

struct PdCtx {
  PrimeLevel pl;
  int n = 1;      // variables per slot
  int r = 0;      // number of slots
  int trunc = 0;  // total degree cap
  bool with_coeff_vars = false;

  bool operator==(const PdCtx&) const = default;
};

PdCtx make_pd_ctx(const PrimeLevel& pl, int n, int r, int trunc,
                  bool with_coeff_vars);

struct PdMono {
  std::vector<int> t;  // plain exponents of coefficient variables (may be empty)
  std::vector<int> e;  // scaled exponents, slot-major: e[s*n + v]

  int total() const;
  // Sum of slot exponents only (the filtration degree of the monomial).
  int fil() const;
  int slot_degree(int s, int n) const;
  // True when every slot carries positive degree.
  bool all_slots_positive(int r, int n) const;
  // True when some single slot has degree exceeding cap.
  bool exceeds_slot_cap(int r, int n, int cap) const;

  bool operator==(const PdMono&) const = default;
  // Ascending total degree; ties broken so that the lexicographically larger
  // flattened exponent vector comes first.
  bool operator<(const PdMono& o) const;
};

// Sparse element: monomial -> nonzero universal coefficient.
struct PdElt {
  std::map<PdMono, Universal> c;

  bool is_zero() const { return c.empty(); }
  bool operator==(const PdElt&) const = default;
};

PdMono mono_one(const PdCtx& ctx);
PdElt elt_zero(const PdCtx& ctx);
PdElt elt_one(const PdCtx& ctx);
PdElt elt_mono(const PdCtx& ctx, PdMono m, Universal coeff);
// The scaled generator x_{(slot,var)}^(1); with_coeff_vars variables are
// addressed by elt_coeff_var.
PdElt elt_slot_var(const PdCtx& ctx, int slot, int var);
PdElt elt_coeff_var(const PdCtx& ctx, int var);

PdElt elt_add(const PdCtx& ctx, const PdElt& a, const PdElt& b);
PdElt elt_sub(const PdCtx& ctx, const PdElt& a, const PdElt& b);
PdElt elt_neg(const PdCtx& ctx, const PdElt& a);
PdElt elt_scale(const PdCtx& ctx, const PdElt& a, const Universal& s);
PdElt elt_scale_q(const PdCtx& ctx, const PdElt& a, const mpq_class& s);

// Product with the scaled-power combination rule on slot variables and the
// plain rule on coefficient variables; drops monomials above the truncation.
PdElt elt_mul(const PdCtx& ctx, const PdElt& a, const PdElt& b);

// x^(k) = x^k / q(k)!  (exact over Q[params]).
PdElt elt_scaled_power(const PdCtx& ctx, const PdElt& x, int k);
// Plain power x^k.
PdElt elt_power(const PdCtx& ctx, const PdElt& x, unsigned k);

// Substitution x |-> image. Slot variables substitute with the scaled rule
// (x^(k) |-> image^k / q(k)!), coefficient variables with the plain rule.
// All images live in the destination context.
struct PdSubst {
  PdCtx src;
  PdCtx dst;
  std::vector<PdElt> slot_image;   // size src.r * src.n, slot-major
  std::vector<PdElt> coeff_image;  // size src.n when src.with_coeff_vars
};

PdElt pd_substitute(const PdSubst& sub, const PdElt& x);

// Plain polynomial coordinates: a plain monomial with slot exponent vector E
// equals (prod_i q(E_i)!) times the scaled monomial with the same exponents.
// Keys are full slot-major exponent vectors of length r*n.
using PlainPoly = std::map<std::vector<int>, Universal>;

PdElt pd_from_plain(const PdCtx& ctx, const PlainPoly& plain);
PlainPoly pd_to_plain(const PdCtx& ctx, const PdElt& x);

// All monomials with total degree <= max_total, in canonical order.
// require_all_slots_positive additionally demands every slot be nonempty;
// slot_cap >= 0 caps each individual slot's degree.
std::vector<PdMono> enumerate_monomials(const PdCtx& ctx, int max_total,
                                        bool require_all_slots_positive,
                                        int slot_cap);

// Names a (slot,var) pair or, with slot = -1, a coefficient variable.
using VarNamer = std::function<std::string(int slot, int var)>;
VarNamer default_namer(const PdCtx& ctx);

std::string mono_str(const PdCtx& ctx, const PdMono& m, const VarNamer& namer);
std::string elt_str(const PdCtx& ctx, const PdElt& x);
std::string elt_str(const PdCtx& ctx, const PdElt& x, const VarNamer& namer);

}  // namespace pdcalc
