#pragma once

// Exact arithmetic layer: prime/level bookkeeping for scaled powers, a
// universal coefficient ring Q[params], and the tower of target coefficient
// rings (Z/p^N, F_p, F_{p^e}, F_p[x], F_p(x)) with exact element operations.

#include <gmpxx.h>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pdcalc {

// ----------------------------------------------------------------------------
// Error taxonomy. Every failure mode the library promises to detect has its
// own type so callers (and the CLI) can map them to exit codes and messages.
// ----------------------------------------------------------------------------

struct CalcError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A rational coefficient whose denominator is divisible by p cannot be
// reduced into a Z/p^N or characteristic-p target ring.
struct NotPIntegral : CalcError {
  using CalcError::CalcError;
};

// Division by a non-unit was requested in a ring where it has no result.
struct NotInvertible : CalcError {
  using CalcError::CalcError;
};

// A universal coefficient mentions a parameter with no assigned value.
struct UnboundParameter : CalcError {
  using CalcError::CalcError;
};

// A rational function was evaluated at a zero of its denominator.
struct PoleAtSpecialization : CalcError {
  using CalcError::CalcError;
};

// The requested computation needs a higher series truncation degree.
struct TruncationTooSmall : CalcError {
  using CalcError::CalcError;
};

// A query asked about a graded slice outside the truncation-safe band.
struct BandViolation : CalcError {
  using CalcError::CalcError;
};

// The ring description is malformed or outside the supported tower.
struct UnsupportedRing : CalcError {
  using CalcError::CalcError;
};

// The operation is not defined for this group-law kind.
struct UnsupportedKind : CalcError {
  using CalcError::CalcError;
};

// An iterative computation could not reach the requested precision.
struct PrecisionUnreachable : CalcError {
  using CalcError::CalcError;
};

// ----------------------------------------------------------------------------
// Prime/level bookkeeping.
//
// Fixing a prime p and a level m >= 0, the scaled power of an element x is
// x^(k) := x^k / q(k)!  with  q(k) = floor(k / p^m).
// Level m = 0 recovers the classical divided power x^k / k!.
// ----------------------------------------------------------------------------

struct PrimeLevel {
  long p = 0;
  int m = 0;
  long pm = 1;  // p^m, guaranteed to fit in long for supported inputs

  bool operator==(const PrimeLevel&) const = default;
};

bool is_prime(long p);

// Validates p prime, m >= 0, and p^m within range.
PrimeLevel make_prime_level(long p, int m);

// q(k) = floor(k / p^m).
long q_part(const PrimeLevel& pl, long k);

// q(k)! as an exact integer.
mpz_class q_factorial(const PrimeLevel& pl, long k);

// x^(k) * x^(l) = pd_mul_coeff(k,l) * x^(k+l).
// Always a nonneg integer: q(k+l)! / (q(k)! q(l)!).
mpz_class pd_mul_coeff(const PrimeLevel& pl, long k, long l);

// Coefficient of x^(a) (x') ^(k-a) in the expansion of (x + x')^(k):
// binom(k,a) q(a)! q(k-a)! / q(k)!.
// A p-integral rational; NOT always an integer (e.g. p=2, m=1, k=6, a=3).
mpq_class pd_split_coeff(const PrimeLevel& pl, long k, long a);

// p-adic valuation of a nonzero integer.
int p_valuation(const mpz_class& z, long p);

// True when the reduced denominator of q is coprime to p.
bool is_p_integral(const mpq_class& q, long p);

// ----------------------------------------------------------------------------
// Universal coefficients: the sparse polynomial ring Q[params] over named
// parameters. Series and complexes are built once over this ring and then
// reduced into any target ring.
// ----------------------------------------------------------------------------

// A parameter monomial: name -> exponent, all exponents > 0.
using PMono = std::map<std::string, int>;

struct Universal {
  // monomial -> nonzero rational coefficient
  std::map<PMono, mpq_class> c;

  static Universal zero();
  static Universal one();
  static Universal constant(const mpq_class& v);
  static Universal param(const std::string& name);

  bool is_zero() const { return c.empty(); }
  bool is_constant() const;
  // Requires is_constant(); zero gives 0.
  mpq_class constant_value() const;

  Universal operator-() const;
  Universal& operator+=(const Universal& o);
  Universal& operator-=(const Universal& o);
  friend Universal operator+(Universal a, const Universal& b) { return a += b; }
  friend Universal operator-(Universal a, const Universal& b) { return a -= b; }
  friend Universal operator*(const Universal& a, const Universal& b);
  Universal& operator*=(const Universal& o) { return *this = *this * o; }

  Universal scaled(const mpq_class& s) const;
  Universal pow(unsigned e) const;

  bool operator==(const Universal& o) const { return c == o.c; }

  // Largest exponent of `name` appearing in any monomial.
  int degree_in(const std::string& name) const;

  // Canonical text: terms in ascending total degree, then the internal
  // monomial order; e.g. "1 - 2*a1 + 3/4*a1*a2^2".
  std::string str() const;
};

// Substitute Universal expressions for named parameters; parameters without
// an image are left symbolic.
Universal universal_subst(const Universal& u,
                          const std::map<std::string, Universal>& images);

// ----------------------------------------------------------------------------
// Target rings.
// ----------------------------------------------------------------------------

enum class RingKind {
  IntegersModPrimePower,  // Z/p^N, N >= 1
  PrimeField,             // F_p
  GaloisField,            // F_{p^e}, e >= 2, fixed irreducible modulus
  PolyOverPrimeField,     // F_p[param]
  RationalFunctions,      // F_p(param)
};

struct Ring {
  RingKind kind = RingKind::PrimeField;
  long p = 0;
  int n_exp = 1;                 // N for Z/p^N
  int ext = 1;                   // e for F_{p^e}
  std::vector<long> gf_modulus;  // monic irreducible, ascending coeffs, size ext+1
  std::string param;             // parameter name for Poly/RationalFunctions
  mpz_class modulus = 0;         // p^N (Z/p^N) or p (F_p)

  bool is_field() const;
  std::string describe() const;

  bool operator==(const Ring& o) const;
};

Ring ring_zmod(long p, int N);
Ring ring_fp(long p);
// e == 1 returns ring_fp(p). Uses a fixed irreducible-modulus table with a
// deterministic search fallback; supports e <= 3.
Ring ring_gf(long p, int e);
Ring ring_poly(long p, const std::string& param);
Ring ring_ratfun(long p, const std::string& param);

// Name of the multiplicative generator symbol used when printing F_{p^e}
// elements.
inline constexpr const char* kGfVarName = "g";

// ----------------------------------------------------------------------------
// Dense univariate polynomials over F_p (also the element type of F_{p^e}).
// ----------------------------------------------------------------------------

struct FpPoly {
  long p = 0;
  std::vector<long> c;  // ascending, reduced mod p, no trailing zeros

  static FpPoly zero(long p) { return FpPoly{p, {}}; }
  static FpPoly constant(long p, long v);
  static FpPoly var(long p);  // the monomial x

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
  long leading() const { return c.empty() ? 0 : c.back(); }
  void normalize();

  friend FpPoly operator+(const FpPoly& a, const FpPoly& b);
  friend FpPoly operator-(const FpPoly& a, const FpPoly& b);
  friend FpPoly operator*(const FpPoly& a, const FpPoly& b);
  FpPoly operator-() const;
  bool operator==(const FpPoly& o) const { return p == o.p && c == o.c; }
  bool operator<(const FpPoly& o) const;  // by degree, then coeffs from top

  FpPoly scaled(long s) const;
  long eval(long x) const;
  // Render with the given variable symbol, descending powers.
  std::string str(const std::string& var) const;
};

// quotient-remainder; divisor must be nonzero.
std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b);
FpPoly fp_gcd(FpPoly a, FpPoly b);  // monic gcd
FpPoly fp_pow_mod(const FpPoly& a, const mpz_class& e, const FpPoly& mod);
// Multiplicative inverse of a modulo mod (both over F_p); throws
// NotInvertible when gcd != 1.
FpPoly fp_inv_mod(const FpPoly& a, const FpPoly& mod);
long fp_inv_scalar(long a, long p);

// Reduced fraction of F_p-polynomials; den monic, gcd(num,den) = 1, 0 = 0/1.
struct RatFun {
  FpPoly num, den;
  bool operator==(const RatFun& o) const { return num == o.num && den == o.den; }
};

RatFun rat_make(FpPoly num, FpPoly den);  // reduces; throws NotInvertible on den=0

// ----------------------------------------------------------------------------
// Ring elements and operations. Representation by ring kind:
//   IntegersModPrimePower, PrimeField : mpz_class in [0, modulus)
//   GaloisField                       : FpPoly of degree < ext
//   PolyOverPrimeField                : FpPoly
//   RationalFunctions                 : RatFun
// ----------------------------------------------------------------------------

using RElem = std::variant<mpz_class, FpPoly, RatFun>;

RElem r_zero(const Ring& R);
RElem r_one(const Ring& R);
RElem r_from_int(const Ring& R, const mpz_class& v);
RElem r_add(const Ring& R, const RElem& a, const RElem& b);
RElem r_sub(const Ring& R, const RElem& a, const RElem& b);
RElem r_mul(const Ring& R, const RElem& a, const RElem& b);
RElem r_neg(const Ring& R, const RElem& a);
RElem r_pow(const Ring& R, RElem a, unsigned e);
bool r_is_zero(const Ring& R, const RElem& a);
bool r_eq(const Ring& R, const RElem& a, const RElem& b);
bool r_is_unit(const Ring& R, const RElem& a);
// Throws NotInvertible for non-units.
RElem r_inv(const Ring& R, const RElem& a);
RElem r_div(const Ring& R, const RElem& a, const RElem& b);  // a * b^{-1}

// p-adic valuation of a Z/p^N element; the zero element reports N.
int r_zmod_valuation(const Ring& R, const RElem& a);

// Reduce an exact rational into the ring; throws NotPIntegral when the
// denominator is not a unit there.
RElem reduce_rational(const Ring& R, const mpq_class& q);

// Reduce a universal coefficient given values for its parameters. Every
// parameter that occurs must be bound or UnboundParameter is thrown.
RElem reduce_universal(const Ring& R, const Universal& u,
                       const std::map<std::string, RElem>& bind);

// Evaluate a Poly/RationalFunctions element at a point of F_p or F_{p^e}.
// `target` must be a PrimeField/GaloisField ring with the same p. Throws
// PoleAtSpecialization when a denominator vanishes.
RElem r_specialize(const Ring& R, const RElem& a, const Ring& target,
                   const RElem& point);

// Canonical text form of an element.
std::string r_str(const Ring& R, const RElem& a);

// Every element of F_p / F_{p^e} in a fixed deterministic order (0 first,
// then ascending representation).
std::vector<RElem> ring_all_elements(const Ring& R);

// Exact binomial coefficient.
mpz_class binom(long n, long k);

}  // namespace pdcalc
