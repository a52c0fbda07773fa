#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pdcalc/formal_group.hpp"

using namespace pdcalc;

namespace {

// Polynomial in the Legendre parameter: coeffs[i] multiplies lam^i.
Universal lam_poly(const std::vector<long>& coeffs) {
  Universal lam = Universal::param("lam");
  Universal out = Universal::zero();
  for (size_t i = 0; i < coeffs.size(); ++i)
    out += lam.pow(static_cast<unsigned>(i)).scaled(coeffs[i]);
  return out;
}

Series prune_to(const Series& s, int trunc) {
  Series r = series_zero(s.nvars, trunc);
  for (auto& [e, v] : s.c) {
    int t = 0;
    for (int x : e) t += x;
    if (t <= trunc) r.c[e] = v;
  }
  return r;
}

}  // namespace

TEST_CASE("series arithmetic basics") {
  Series x = series_var(2, 4, 0);
  Series y = series_var(2, 4, 1);
  Series sq = series_mul(series_add(x, y), series_add(x, y));
  CHECK(series_coeff(sq, {2, 0}) == Universal::one());
  CHECK(series_coeff(sq, {1, 1}) == Universal::constant(2));
  CHECK(series_coeff(sq, {0, 2}) == Universal::one());
  CHECK(sq.c.size() == 3);

  CHECK(series_low_degree(sq) == 2);
  CHECK(series_low_degree(series_zero(2, 4)) == 5);

  // Truncation drops everything beyond the bound.
  Series xt = series_var(1, 2, 0);
  Series cube = series_pow(series_add(xt, series_mul(xt, xt)), 3);
  CHECK(series_is_zero(cube));

  Series diff = series_sub(sq, sq);
  CHECK(series_is_zero(diff));
}

TEST_CASE("series substitution composes polynomials") {
  // f(u) = u^2 composed with u = x + x^2 gives x^2 + 2x^3 + x^4.
  Series f = series_pow(series_var(1, 4, 0), 2);
  Series img = series_add(series_var(1, 4, 0),
                          series_pow(series_var(1, 4, 0), 2));
  Series got = series_subst(f, {img}, 1, 4);
  CHECK(series_coeff(got, {2}) == Universal::one());
  CHECK(series_coeff(got, {3}) == Universal::constant(2));
  CHECK(series_coeff(got, {4}) == Universal::one());
  CHECK(got.c.size() == 3);

  // Images with a constant term are rejected.
  Series bad = series_const(1, 4, Universal::one());
  CHECK_THROWS_AS(series_subst(f, {bad}, 1, 4), CalcError);

  // Variable-count mismatches are rejected.
  CHECK_THROWS_AS(series_subst(f, {img, img}, 1, 4), CalcError);
}

TEST_CASE("series unit inversion") {
  Series one = series_const(1, 5, Universal::one());
  Series z = series_var(1, 5, 0);

  Series geom = series_inv_unit(series_sub(one, z));
  for (int k = 0; k <= 5; ++k) CHECK(series_coeff(geom, {k}) == Universal::one());

  Series inv2z = series_inv_unit(series_add(series_const(1, 5, Universal::constant(2)), z));
  CHECK(series_coeff(inv2z, {0}) == Universal::constant(mpq_class(1, 2)));
  CHECK(series_coeff(inv2z, {1}) == Universal::constant(mpq_class(-1, 4)));
  CHECK(series_coeff(inv2z, {2}) == Universal::constant(mpq_class(1, 8)));
  CHECK(series_coeff(inv2z, {3}) == Universal::constant(mpq_class(-1, 16)));

  // Product with the original is 1.
  Series prod = series_mul(inv2z, series_add(series_const(1, 5, Universal::constant(2)), z));
  CHECK(prod == one);

  CHECK_THROWS_AS(series_inv_unit(z), NotInvertible);
}

TEST_CASE("series rendering") {
  GroupLaw gm = make_multiplicative(4);
  CHECK(series_str(gm.F, {"z1", "z2"}) == "z1 + z2 + z1*z2");
  CHECK(series_str(series_zero(2, 3), {"z1", "z2"}) == "0");
  CHECK(series_str(gm.inverse, {"s"}) == "-s + s^2 - s^3 + s^4");

  GroupLaw leg = make_legendre(3);
  std::string fs = series_str(leg.F, {"z1", "z2"});
  CHECK(fs.find("(1 + lam)*z1^2*z2") != std::string::npos);
}

TEST_CASE("additive law") {
  GroupLaw G = make_additive(8);
  CHECK(G.coordinate == "t");
  CHECK(G.F.c.size() == 2);
  CHECK(law_coeff(G, 1, 0) == Universal::one());
  CHECK(law_coeff(G, 0, 1) == Universal::one());
  CHECK(check_unit(G));
  CHECK(check_commutative(G));
  CHECK(check_associative(G, 8));
  CHECK(check_inverse(G));
  CHECK(check_odd(G));
}

TEST_CASE("multiplicative law") {
  GroupLaw G = make_multiplicative(8);
  CHECK(G.coordinate == "s");
  CHECK(G.F.c.size() == 3);
  CHECK(law_coeff(G, 1, 1) == Universal::one());
  // Inverse is the alternating geometric series.
  for (int k = 1; k <= 8; ++k)
    CHECK(series_coeff(G.inverse, {k}) ==
          Universal::constant(k % 2 == 0 ? 1 : -1));
  CHECK(check_unit(G));
  CHECK(check_commutative(G));
  CHECK(check_associative(G, 8));
  CHECK(check_inverse(G));
  CHECK_FALSE(check_odd(G));
}

TEST_CASE("legendre curve expansion") {
  GroupLaw G = make_legendre(7);
  // w(z) = z^3 - (lam+1) z^5 + (lam^2+3lam+1) z^7 - ... through z^11.
  CHECK(series_coeff(G.weq, {3}) == Universal::one());
  CHECK(series_coeff(G.weq, {5}) == lam_poly({-1, -1}));
  CHECK(series_coeff(G.weq, {7}) == lam_poly({1, 3, 1}));
  CHECK(series_coeff(G.weq, {9}) == lam_poly({-1, -6, -6, -1}));
  CHECK(series_coeff(G.weq, {11}) == lam_poly({1, 10, 20, 10, 1}));
  for (int k = 0; k <= 11; ++k)
    if (k % 2 == 0 || k == 1) CHECK(series_coeff(G.weq, {k}).is_zero());
}

TEST_CASE("legendre group law coefficients") {
  GroupLaw G = make_legendre(7);
  CHECK(G.trunc == 7);
  CHECK(G.params == std::vector<std::string>{"lam"});

  CHECK(law_coeff(G, 1, 0) == Universal::one());
  CHECK(law_coeff(G, 0, 1) == Universal::one());

  // Degree 3: coefficient of z1*z2^2 (and symmetrically) is lam + 1.
  CHECK(law_coeff(G, 1, 2) == lam_poly({1, 1}));
  CHECK(law_coeff(G, 2, 1) == lam_poly({1, 1}));

  // Degree 5.
  CHECK(law_coeff(G, 4, 1) == lam_poly({0, -2}));
  CHECK(law_coeff(G, 1, 4) == lam_poly({0, -2}));
  CHECK(law_coeff(G, 3, 2) == lam_poly({1, -2, 1}));
  CHECK(law_coeff(G, 2, 3) == lam_poly({1, -2, 1}));

  // Degree 7.
  CHECK(law_coeff(G, 6, 1) == lam_poly({0, 2, 2}));
  CHECK(law_coeff(G, 1, 6) == lam_poly({0, 2, 2}));
  CHECK(law_coeff(G, 4, 3) == lam_poly({1, -1, -1, 1}));
  CHECK(law_coeff(G, 3, 4) == lam_poly({1, -1, -1, 1}));
  CHECK(law_coeff(G, 5, 2).is_zero());
  CHECK(law_coeff(G, 2, 5).is_zero());

  // The law is odd: every even total degree vanishes.
  for (auto& [e, v] : G.F.c) CHECK((e[0] + e[1]) % 2 == 1);
}

TEST_CASE("legendre axioms") {
  GroupLaw G = make_legendre(7);
  CHECK(check_unit(G));
  CHECK(check_commutative(G));
  CHECK(check_associative(G, 7));
  CHECK(check_inverse(G));
  CHECK(check_odd(G));
  CHECK(G.inverse == series_neg(series_var(1, 7, 0)));
}

TEST_CASE("legendre construction is truncation stable") {
  GroupLaw G7 = make_legendre(7);
  GroupLaw G5 = make_legendre(5);
  CHECK(prune_to(G7.F, 5) == G5.F);
  CHECK(prune_to(G7.inverse, 5) == G5.inverse);
}

TEST_CASE("generic weierstrass law") {
  GroupLaw G = make_weierstrass(5);
  Universal a1 = Universal::param("a1");
  Universal a2 = Universal::param("a2");
  Universal a3 = Universal::param("a3");

  CHECK(law_coeff(G, 1, 0) == Universal::one());
  CHECK(law_coeff(G, 1, 1) == -a1);
  CHECK(law_coeff(G, 2, 1) == -a2);
  CHECK(law_coeff(G, 1, 2) == -a2);
  CHECK(law_coeff(G, 3, 1) == a3.scaled(-2));
  CHECK(law_coeff(G, 1, 3) == a3.scaled(-2));
  CHECK(law_coeff(G, 2, 2) == a1 * a2 - a3.scaled(3));

  CHECK(check_unit(G));
  CHECK(check_commutative(G));
  CHECK(check_associative(G, 5));
  CHECK(check_inverse(G));
}

TEST_CASE("weierstrass specializes to the legendre law") {
  GroupLaw W = make_weierstrass(6);
  std::map<std::string, Universal> images = {
      {"a1", Universal::zero()},
      {"a2", -lam_poly({1, 1})},
      {"a3", Universal::zero()},
      {"a4", Universal::param("lam")},
      {"a6", Universal::zero()},
  };
  GroupLaw S = specialize_params(W, images);
  GroupLaw L = make_legendre(6);
  CHECK(S.F == L.F);
  CHECK(S.inverse == L.inverse);
  CHECK(S.params == std::vector<std::string>{"lam"});
}

TEST_CASE("degenerate cubics recover the classical laws") {
  GroupLaw W = make_weierstrass(6);

  // All coefficients zero: y^2 = x^3 degenerates to the additive law.
  std::map<std::string, Universal> zeros = {
      {"a1", Universal::zero()}, {"a2", Universal::zero()},
      {"a3", Universal::zero()}, {"a4", Universal::zero()},
      {"a6", Universal::zero()},
  };
  GroupLaw Ga = specialize_params(W, zeros);
  CHECK(Ga.F == make_additive(6).F);
  CHECK(Ga.inverse == make_additive(6).inverse);

  // Nodal cubic y^2 + xy = x^3: the law is exactly z1 + z2 - z1*z2.
  std::map<std::string, Universal> nodal = zeros;
  nodal["a1"] = Universal::one();
  GroupLaw Gn = specialize_params(W, nodal);
  Series x = series_var(2, 6, 0);
  Series y = series_var(2, 6, 1);
  Series expect = series_sub(series_add(x, y), series_mul(x, y));
  CHECK(Gn.F == expect);
}

TEST_CASE("law kind names") {
  CHECK(group_law_kind_name(GroupLawKind::Additive) == "additive");
  CHECK(group_law_kind_name(GroupLawKind::Multiplicative) == "multiplicative");
  CHECK(group_law_kind_name(GroupLawKind::EllipticLegendre) == "legendre");
  CHECK(group_law_kind_name(GroupLawKind::EllipticWeierstrass) == "weierstrass");
}

TEST_CASE("parameter substitution in universal coefficients") {
  Universal lam = Universal::param("lam");
  Universal u = (lam + Universal::one()).pow(2);
  std::map<std::string, Universal> img = {{"lam", Universal::constant(2)}};
  CHECK(universal_subst(u, img) == Universal::constant(9));

  // Unmentioned parameters stay symbolic.
  Universal v = lam * Universal::param("mu");
  std::map<std::string, Universal> img2 = {{"mu", Universal::constant(3)}};
  CHECK(universal_subst(v, img2) == lam.scaled(3));
}
