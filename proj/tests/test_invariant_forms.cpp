#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "pdcalc/invariant_forms.hpp"
#include "pdcalc/linalg.hpp"

using namespace pdcalc;

namespace {

Universal U(long v) { return Universal::constant(mpq_class(v)); }

std::vector<RElem> vec(const Ring& R, const std::vector<long>& v) {
  std::vector<RElem> out;
  out.reserve(v.size());
  for (long x : v) out.push_back(r_from_int(R, x));
  return out;
}

Mat rows_of(const Ring& R, const std::vector<std::vector<long>>& rows,
            int cols) {
  std::vector<std::vector<RElem>> rs;
  rs.reserve(rows.size());
  for (const auto& r : rows) rs.push_back(vec(R, r));
  return mat_from_rows(R, rs, cols);
}

PdMono pair_mono(const PdCtx& ctx, int a, int b) {
  PdMono mo;
  mo.e = {a, b};
  (void)ctx;
  return mo;
}

// Index of z^(a) (x) z^(b) in the degree-two ambient basis.
int w2_at(const DeltaData& dd, int a, int b) {
  auto it = dd.w2.index.find(pair_mono(dd.w2.ctx, a, b));
  REQUIRE(it != dd.w2.index.end());
  return it->second;
}

}  // namespace

TEST_CASE("additive delta is binomial through degree p^m") {
  DeltaData dd = build_delta(make_additive(6), make_prime_level(3, 1), 6);
  Ring R = ring_zmod(3, 3);
  Mat D = umat_reduce(R, dd.delta);
  REQUIRE(D.cols == 3);
  REQUIRE(D.rows == static_cast<int>(dd.w2.basis.size()));
  // delta(t^(k)) = -sum_i binom(k,i) t^(i) (x) t^(k-i); nothing else.
  for (int k = 1; k <= 3; ++k) {
    Mat expect = Mat::zero(R, D.rows, 1);
    for (int i = 1; i <= k - 1; ++i)
      expect.at(w2_at(dd, i, k - i), 0) = r_from_int(R, -binom(k, i));
    for (int r = 0; r < D.rows; ++r)
      CHECK(r_eq(R, D.at(r, k - 1), expect.at(r, 0)));
  }

  std::vector<std::string> table = delta_table(R, dd);
  REQUIRE(table.size() == 3);
  CHECK(table[0] == "delta(t) = 0");
  CHECK(table[1] == "delta(t^(2)) = 25*t1*t2");
  CHECK(table[2] == "delta(t^(3)) = 24*t1^(2)*t2 + 24*t1*t2^(2)");
}

TEST_CASE("additive kernels over F3 and Z/4") {
  DeltaData d3 = build_delta(make_additive(6), make_prime_level(3, 1), 6);
  Ring F3 = ring_fp(3);
  Mat k3 = closed_form_rows(F3, d3);
  CHECK(span_equal(k3, rows_of(F3, {{1, 0, 0}, {0, 0, 1}}, 3)));
  CHECK(span_invariant_factors(F3, k3) == std::vector<mpz_class>{1, 1});

  DeltaData d2 = build_delta(make_additive(4), make_prime_level(2, 1), 4);
  Ring Z4 = ring_zmod(2, 2);
  Mat k2 = closed_form_rows(Z4, d2);
  CHECK(span_equal(k2, rows_of(Z4, {{1, 0}, {0, 2}}, 2)));
  // The second generator is 2-torsion: the kernel is not free.
  CHECK(span_invariant_factors(Z4, k2) == std::vector<mpz_class>{1, 2});

  Membership twice_square = membership_check(Z4, d2, vec(Z4, {0, 2}));
  CHECK(twice_square.closed);
  CHECK(twice_square.fil_degree == 2);
  CHECK_FALSE(membership_check(Z4, d2, vec(Z4, {0, 1})).closed);
}

TEST_CASE("multiplicative torsion kernel over Z/4") {
  DeltaData dd = build_delta(make_multiplicative(4), make_prime_level(2, 1), 4);
  Ring Z4 = ring_zmod(2, 2);
  Mat ker = closed_form_rows(Z4, dd);
  CHECK(span_equal(ker, rows_of(Z4, {{2, 1}, {0, 2}}, 2)));

  // Exhaustive cross-check: membership agrees with the kernel span on all of
  // (Z/4)^2.
  for (long x = 0; x < 4; ++x)
    for (long y = 0; y < 4; ++y) {
      std::vector<RElem> v = vec(Z4, {x, y});
      CHECK(membership_check(Z4, dd, v).closed == span_member(ker, v));
    }

  Membership log_like = membership_check(Z4, dd, vec(Z4, {2, 3}));
  CHECK(log_like.closed);  // 2s - s^2
  CHECK(log_like.fil_degree == 1);
  Membership log_plus = membership_check(Z4, dd, vec(Z4, {2, 1}));
  CHECK(log_plus.closed);  // 2s + s^2 lands in the kernel too
  CHECK(log_plus.fil_degree == 1);
  Membership top = membership_check(Z4, dd, vec(Z4, {0, 2}));
  CHECK(top.closed);  // 2s^2
  CHECK(top.fil_degree == 2);
  Membership zero = membership_check(Z4, dd, vec(Z4, {0, 0}));
  CHECK(zero.closed);
  CHECK(zero.fil_degree == 2);

  CHECK(span_equal(fil_piece_rows(Z4, dd, 0), ker));
  CHECK(span_equal(fil_piece_rows(Z4, dd, 1), ker));
  Mat fil2 = fil_piece_rows(Z4, dd, 2);
  CHECK(span_equal(fil2, rows_of(Z4, {{0, 2}}, 2)));
  CHECK(span_invariant_factors(Z4, fil2) == std::vector<mpz_class>{2});
  CHECK_THROWS_AS(fil_piece_rows(Z4, dd, 3), BandViolation);

  std::vector<std::string> table = delta_table(Z4, dd);
  CHECK(table[0] == "delta(s) = 3*s1*s2");
}

TEST_CASE("top scaled power closes over the prime field") {
  DeltaData g2 = build_delta(make_multiplicative(4), make_prime_level(2, 1), 4);
  Ring F2 = ring_fp(2);
  CHECK(membership_check(F2, g2, vec(F2, {0, 1})).closed);
  CHECK_FALSE(membership_check(F2, g2, vec(F2, {1, 0})).closed);

  DeltaData g3 = build_delta(make_multiplicative(6), make_prime_level(3, 1), 6);
  Ring F3 = ring_fp(3);
  Membership m = membership_check(F3, g3, vec(F3, {0, 0, 1}));
  CHECK(m.closed);
  CHECK(m.fil_degree == 3);
  CHECK_FALSE(membership_check(F3, g3, vec(F3, {0, 1, 0})).closed);
  // Without the relation columns s^(3) is not closed: the relation at
  // degree six absorbs its differential.
  CHECK_FALSE(
      membership_check(F3, g3, vec(F3, {0, 0, 1}), {}, false).closed);
}

TEST_CASE("curve family delta columns") {
  DeltaData dd = build_delta(make_legendre(6), make_prime_level(3, 1), 6);
  Universal lam = Universal::param("lam");
  Universal lp1 = U(1) + lam;                       // lam + 1
  Universal lm1sq = (lam - U(1)) * (lam - U(1));    // (lam - 1)^2

  UMat expect = UMat::zero(dd.delta.rows, 3);
  auto put = [&](int a, int b, int col, const Universal& u) {
    expect.at(w2_at(dd, a, b), col) = u;
  };
  put(1, 2, 0, -lp1);
  put(2, 1, 0, -lp1);
  put(2, 3, 0, -lm1sq);
  put(3, 2, 0, -lm1sq);

  put(1, 1, 1, U(-2));
  put(1, 3, 1, U(-2) * lp1);
  put(2, 2, 1, U(-4) * lp1);
  put(3, 1, 1, U(-2) * lp1);
  put(3, 3, 1, U(-2) * (U(3) * lam * lam - U(2) * lam + U(3)));

  put(1, 2, 2, U(-3));
  put(2, 1, 2, U(-3));
  put(2, 3, 2, U(-9) * lp1);
  put(3, 2, 2, U(-9) * lp1);

  REQUIRE(dd.delta.rows == expect.rows);
  REQUIRE(dd.delta.cols == expect.cols);
  for (long i = 0; i < expect.rows; ++i)
    for (long j = 0; j < expect.cols; ++j)
      CHECK(dd.delta.at(i, j) == expect.at(i, j));
}

TEST_CASE("symbolic membership over the Z/9 lift") {
  DeltaData dd = build_delta(make_legendre(6), make_prime_level(3, 1), 6);
  Ring Z9 = ring_zmod(3, 2);
  Universal lam = Universal::param("lam");
  Universal lp1 = U(1) + lam;

  SymbolicMembership plus =
      membership_check_symbolic(Z9, dd, {U(3), U(0), lp1}, "lam", 4);
  CHECK_FALSE(plus.closed);
  CHECK(plus.obstruction_proven);
  CHECK(plus.fil_degree == 1);

  SymbolicMembership minus =
      membership_check_symbolic(Z9, dd, {U(3), U(0), -lp1}, "lam", 4);
  CHECK(minus.closed);
  CHECK(minus.fil_degree == 1);

  // The top generator alone does not survive the lift: its differential is
  // 3-torsion but not 9-torsion.
  SymbolicMembership top =
      membership_check_symbolic(Z9, dd, {U(0), U(0), lp1}, "lam", 4);
  CHECK_FALSE(top.closed);
  CHECK(top.obstruction_proven);
  CHECK(top.fil_degree == 3);
}

TEST_CASE("membership of the scaled top power over F3 with symbolic lambda") {
  DeltaData dd = build_delta(make_legendre(6), make_prime_level(3, 1), 6);
  Ring P = ring_poly(3, "lam");
  FpPoly one = FpPoly::constant(3, 1);
  FpPoly lp1 = FpPoly::var(3) + one;
  std::vector<RElem> v = {RElem(FpPoly::zero(3)), RElem(FpPoly::zero(3)),
                          RElem(lp1)};
  Membership m = membership_check(P, dd, v);
  CHECK(m.closed);
  CHECK(m.fil_degree == 3);
}

TEST_CASE("fiber scans flag the supersingular parameter") {
  DeltaData dd = build_delta(make_legendre(6), make_prime_level(3, 1), 6);

  ScanResult s1 = rank_scan(dd, 1);
  CHECK(s1.generic_rank == 1);
  REQUIRE(s1.points.size() == 1);
  CHECK(s1.points[0].lambda == "2");
  CHECK(s1.points[0].rank == 2);
  CHECK(s1.points[0].naive_rank == 1);
  CHECK(s1.points[0].supersingular);
  REQUIRE(s1.points[0].generators.size() == 2);
  CHECK(s1.points[0].generators[0] == "z");
  CHECK(s1.points[0].generators[1] == "z^(3)");

  ScanResult s2 = rank_scan(dd, 2);
  CHECK(s2.generic_rank == 1);
  REQUIRE(s2.points.size() == 7);
  int super = 0;
  for (const ScanPoint& pt : s2.points) {
    if (pt.supersingular) {
      ++super;
      CHECK(pt.lambda == "2");
      CHECK(pt.rank == 2);
    } else {
      CHECK(pt.rank == 1);
      REQUIRE(pt.generators.size() == 1);
      CHECK(pt.generators[0] == "z^(3)");
    }
    CHECK(pt.naive_rank == 1);
  }
  CHECK(super == 1);

  Ring F3 = ring_fp(3);
  CHECK_THROWS_AS(scan_at(dd, F3, r_from_int(F3, 0)), PoleAtSpecialization);
  CHECK_THROWS_AS(scan_at(dd, F3, r_from_int(F3, 1)), PoleAtSpecialization);
  CHECK_THROWS_AS(rank_scan(dd, 4), UnsupportedRing);

  DeltaData add = build_delta(make_additive(6), make_prime_level(3, 1), 6);
  CHECK_THROWS_AS(rank_scan(add, 1), UnsupportedKind);

  DeltaData dd2 = build_delta(make_legendre(4), make_prime_level(2, 1), 4);
  CHECK_THROWS_AS(rank_scan(dd2, 1), UnsupportedRing);
}

TEST_CASE("scaling the coordinate preserves fiber ranks") {
  GroupLaw G = make_legendre(6);
  GroupLaw Gs = scale_coordinate(G, "u_inv");
  CHECK(check_unit(Gs));
  CHECK(check_commutative(Gs));
  CHECK(check_associative(Gs, 5));

  DeltaData dd = build_delta(G, make_prime_level(3, 1), 6);
  DeltaData ds = build_delta(Gs, make_prime_level(3, 1), 6);
  Ring F9 = ring_gf(3, 2);
  RElem g = RElem(FpPoly::var(3));  // a generator of F9 over F3
  RElem ginv = r_inv(F9, g);

  std::vector<RElem> lambdas = {r_from_int(F9, 2), g};
  for (const RElem& l0 : lambdas) {
    ScanPoint base = scan_at(dd, F9, l0);
    std::map<std::string, RElem> bind{{"lam", l0}, {"u_inv", ginv}};
    Mat scaled = closed_form_rows(F9, ds, bind);
    CHECK(scaled.rows == base.rank);
  }
}

TEST_CASE("comparison images into the coordinate complex") {
  std::vector<std::string> add =
      nu_map_images(make_additive(6), make_prime_level(3, 1));
  CHECK(add == std::vector<std::string>{"(dt)^(1)", "(dt)^(2)", "(dt)^(3)"});
  std::vector<std::string> mul =
      nu_map_images(make_multiplicative(4), make_prime_level(2, 1));
  CHECK(mul == std::vector<std::string>{"t^-1*(dt)^(1)", "t^-2*(dt)^(2)"});
  CHECK_THROWS_AS(nu_map_images(make_legendre(4), make_prime_level(3, 1)),
                  UnsupportedKind);
}

TEST_CASE("level zero closes everything") {
  for (const GroupLaw& law : {make_multiplicative(2), make_additive(2)}) {
    DeltaData dd = build_delta(law, make_prime_level(3, 0), 2);
    REQUIRE(dd.w1.basis.size() == 1);
    Ring F3 = ring_fp(3);
    CHECK(closed_form_rows(F3, dd).rows == 1);
    Ring Z9 = ring_zmod(3, 2);
    Mat k = closed_form_rows(Z9, dd);
    CHECK(k.rows == 1);
    CHECK(span_invariant_factors(Z9, k) == std::vector<mpz_class>{1});
  }
}

TEST_CASE("kernels are stable under raising the truncation") {
  Ring F3 = ring_fp(3);
  DeltaData a = build_delta(make_multiplicative(6), make_prime_level(3, 1), 6);
  DeltaData b = build_delta(make_multiplicative(8), make_prime_level(3, 1), 8);
  CHECK(span_equal(closed_form_rows(F3, a), closed_form_rows(F3, b)));

  DeltaData la = build_delta(make_legendre(6), make_prime_level(3, 1), 6);
  DeltaData lb = build_delta(make_legendre(7), make_prime_level(3, 1), 7);
  Ring F9 = ring_gf(3, 2);
  CHECK(scan_at(la, F9, r_from_int(F9, 2)).rank ==
        scan_at(lb, F9, r_from_int(F9, 2)).rank);
}
