#pragma once

// One-dimensional commutative formal group laws with exact coefficients.
//
// Laws are truncated power series F(z1, z2) over Universal coefficients
// (rationals extended by named parameters such as the Legendre parameter).
// The elliptic laws are produced by the chord construction on the curve's
// local equation at the origin; the additive and multiplicative laws are
// built directly.

#include <map>
#include <string>
#include <vector>

#include "pdcalc/arith.hpp"

namespace pdcalc {

// ----------------------------------------------------------------------------
// Truncated multivariate power series.
// ----------------------------------------------------------------------------

// Sparse series in `nvars` variables; only terms of total degree <= trunc are
// kept, and stored coefficients are never zero.
struct Series {
  int nvars = 1;
  int trunc = 0;
  std::map<std::vector<int>, Universal> c;

  bool operator==(const Series& o) const {
    return nvars == o.nvars && c == o.c;
  }
};

Series series_zero(int nvars, int trunc);
Series series_const(int nvars, int trunc, const Universal& u);
// The variable x_i (0-based i < nvars).
Series series_var(int nvars, int trunc, int i);

bool series_is_zero(const Series& s);
// Coefficient of the monomial with exponent vector e (zero if absent).
Universal series_coeff(const Series& s, const std::vector<int>& e);
void series_set(Series& s, const std::vector<int>& e, const Universal& v);
// Minimal total degree of the support; trunc + 1 for the zero series.
int series_low_degree(const Series& s);

Series series_add(const Series& a, const Series& b);
Series series_sub(const Series& a, const Series& b);
Series series_neg(const Series& a);
Series series_scale(const Series& a, const Universal& u);
Series series_mul(const Series& a, const Series& b);
Series series_pow(const Series& a, int k);

// Substitute images[i] for x_i.  Every image must live in `out_nvars`
// variables and have zero constant term; the result is truncated at
// `out_trunc`.
Series series_subst(const Series& s, const std::vector<Series>& images,
                    int out_nvars, int out_trunc);

// Multiplicative inverse of a series whose constant term is a nonzero
// rational; throws NotInvertible otherwise.
Series series_inv_unit(const Series& b);

std::string series_str(const Series& s, const std::vector<std::string>& names);

// ----------------------------------------------------------------------------
// Group laws.
// ----------------------------------------------------------------------------

enum class GroupLawKind {
  Additive,
  Multiplicative,
  EllipticLegendre,
  EllipticWeierstrass,
};

std::string group_law_kind_name(GroupLawKind k);

struct GroupLaw {
  GroupLawKind kind;
  // F is exact through total degree `trunc`.
  int trunc = 0;
  // F(z1, z2), two variables.
  Series F;
  // Formal inverse i(z), one variable: F(z, i(z)) = 0.
  Series inverse;
  // For the elliptic kinds, the local expansion w(z) of the curve equation
  // (w = z^3 + ...); the zero series otherwise.
  Series weq;
  // Names of free coefficient parameters ("lam", or "a1".."a6").
  std::vector<std::string> params;
  // Display name of the coordinate: "t" (additive), "s" (multiplicative),
  // "z" (elliptic).
  std::string coordinate;
};

GroupLaw make_additive(int trunc);
GroupLaw make_multiplicative(int trunc);
// Legendre family y^2 = x(x-1)(x-lam), expanded at the origin; parameter
// "lam" stays symbolic.
GroupLaw make_legendre(int trunc);
// Generic Weierstrass curve with symbolic coefficients a1, a2, a3, a4, a6.
GroupLaw make_weierstrass(int trunc);

// Substitute parameter values (Universal expressions) into every coefficient
// of F, inverse and weq; parameters not mentioned stay symbolic.  Used e.g.
// to specialize the generic Weierstrass law to the Legendre family.
GroupLaw specialize_params(const GroupLaw& G,
                           const std::map<std::string, Universal>& images);

// Coefficient of z1^i z2^j in F.
Universal law_coeff(const GroupLaw& G, int i, int j);

// Conjugate the law by the coordinate scaling z -> z / s, with s a fresh
// symbolic parameter standing for the inverse of the unit: the coefficient of
// a degree-d monomial in F picks up s^(d-1), in the formal inverse s^(d-1),
// and in the curve expansion s^(d-3).  Binding s to 1/u later recovers the
// law in the coordinate u*z.
GroupLaw scale_coordinate(const GroupLaw& G, const std::string& s);

// ----------------------------------------------------------------------------
// Axiom checks (exact, through total degree `degree`, capped at G.trunc).
// ----------------------------------------------------------------------------

// F(z,0) = z and F(0,z) = z.
bool check_unit(const GroupLaw& G);
// F(z1,z2) = F(z2,z1).
bool check_commutative(const GroupLaw& G);
// F(F(x,y),z) = F(x,F(y,z)) through total degree `degree`.
bool check_associative(const GroupLaw& G, int degree);
// F(z, i(z)) = 0.
bool check_inverse(const GroupLaw& G);
// i(z) = -z and F(-x,-y) = -F(x,y).
bool check_odd(const GroupLaw& G);

}  // namespace pdcalc
