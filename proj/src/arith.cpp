#include "pdcalc/arith.hpp"

#include <algorithm>
#include <sstream>

namespace pdcalc {

// ----------------------------------------------------------------------------
// Prime/level bookkeeping
// ----------------------------------------------------------------------------

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

PrimeLevel make_prime_level(long p, int m) {
  if (p >= (1L << 20)) throw UnsupportedRing("prime too large: " + std::to_string(p));
  if (!is_prime(p)) throw UnsupportedRing("not a prime: " + std::to_string(p));
  if (m < 0) throw UnsupportedRing("negative level");
  PrimeLevel pl;
  pl.p = p;
  pl.m = m;
  pl.pm = 1;
  for (int i = 0; i < m; ++i) {
    if (pl.pm > (1L << 40) / p) throw UnsupportedRing("p^m too large");
    pl.pm *= p;
  }
  return pl;
}

long q_part(const PrimeLevel& pl, long k) {
  if (k < 0) throw CalcError("q_part of negative exponent");
  return k / pl.pm;
}

mpz_class q_factorial(const PrimeLevel& pl, long k) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(q_part(pl, k)));
  return r;
}

mpz_class pd_mul_coeff(const PrimeLevel& pl, long k, long l) {
  if (k < 0 || l < 0) throw CalcError("negative exponent");
  mpz_class num = q_factorial(pl, k + l);
  mpz_class den = q_factorial(pl, k) * q_factorial(pl, l);
  mpz_class r;
  mpz_divexact(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return r;
}

mpq_class pd_split_coeff(const PrimeLevel& pl, long k, long a) {
  if (a < 0 || a > k) throw CalcError("split index out of range");
  mpz_class num = binom(k, a) * q_factorial(pl, a) * q_factorial(pl, k - a);
  mpz_class den = q_factorial(pl, k);
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

int p_valuation(const mpz_class& z, long p) {
  if (z == 0) throw CalcError("valuation of zero");
  mpz_class v = z, q, r;
  int val = 0;
  mpz_class P(p);
  for (;;) {
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), v.get_mpz_t(), P.get_mpz_t());
    if (r != 0) break;
    v = q;
    ++val;
  }
  return val;
}

bool is_p_integral(const mpq_class& q, long p) {
  mpq_class c = q;
  c.canonicalize();
  return !mpz_divisible_ui_p(c.get_den().get_mpz_t(), static_cast<unsigned long>(p));
}

mpz_class binom(long n, long k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

// ----------------------------------------------------------------------------
// Universal coefficients
// ----------------------------------------------------------------------------

Universal Universal::zero() { return Universal{}; }

Universal Universal::one() { return constant(1); }

Universal Universal::constant(const mpq_class& v) {
  Universal u;
  if (v != 0) u.c[PMono{}] = v;
  return u;
}

Universal Universal::param(const std::string& name) {
  Universal u;
  u.c[PMono{{name, 1}}] = 1;
  return u;
}

bool Universal::is_constant() const {
  return c.empty() || (c.size() == 1 && c.begin()->first.empty());
}

mpq_class Universal::constant_value() const {
  if (c.empty()) return 0;
  if (!is_constant()) throw CalcError("coefficient is not constant: " + str());
  return c.begin()->second;
}

Universal Universal::operator-() const {
  Universal r;
  for (auto& [m, v] : c) r.c[m] = -v;
  return r;
}

Universal& Universal::operator+=(const Universal& o) {
  for (auto& [m, v] : o.c) {
    auto it = c.find(m);
    if (it == c.end()) {
      c.emplace(m, v);
    } else {
      it->second += v;
      if (it->second == 0) c.erase(it);
    }
  }
  return *this;
}

Universal& Universal::operator-=(const Universal& o) {
  for (auto& [m, v] : o.c) {
    auto it = c.find(m);
    if (it == c.end()) {
      c.emplace(m, -v);
    } else {
      it->second -= v;
      if (it->second == 0) c.erase(it);
    }
  }
  return *this;
}

Universal operator*(const Universal& a, const Universal& b) {
  Universal r;
  for (auto& [ma, va] : a.c)
    for (auto& [mb, vb] : b.c) {
      PMono m = ma;
      for (auto& [name, e] : mb) m[name] += e;
      auto it = r.c.find(m);
      if (it == r.c.end()) {
        mpq_class v = va * vb;
        if (v != 0) r.c.emplace(std::move(m), std::move(v));
      } else {
        it->second += va * vb;
        if (it->second == 0) r.c.erase(it);
      }
    }
  return r;
}

Universal Universal::scaled(const mpq_class& s) const {
  Universal r;
  if (s == 0) return r;
  for (auto& [m, v] : c) r.c[m] = v * s;
  return r;
}

Universal Universal::pow(unsigned e) const {
  Universal r = one();
  Universal base = *this;
  while (e) {
    if (e & 1u) r = r * base;
    base = base * base;
    e >>= 1u;
  }
  return r;
}

int Universal::degree_in(const std::string& name) const {
  int d = 0;
  for (auto& [m, v] : c) {
    auto it = m.find(name);
    if (it != m.end()) d = std::max(d, it->second);
  }
  return d;
}

Universal universal_subst(const Universal& u,
                          const std::map<std::string, Universal>& images) {
  Universal out = Universal::zero();
  for (auto& [m, v] : u.c) {
    Universal term = Universal::constant(v);
    for (auto& [name, e] : m) {
      auto it = images.find(name);
      Universal base =
          (it != images.end()) ? it->second : Universal::param(name);
      term *= base.pow(static_cast<unsigned>(e));
    }
    out += term;
  }
  return out;
}

namespace {

int pmono_total(const PMono& m) {
  int t = 0;
  for (auto& [n, e] : m) t += e;
  return t;
}

std::string pmono_str(const PMono& m) {
  std::string s;
  for (auto& [n, e] : m) {
    if (!s.empty()) s += "*";
    s += n;
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

}  // namespace

std::string Universal::str() const {
  if (c.empty()) return "0";
  std::vector<std::pair<PMono, mpq_class>> terms(c.begin(), c.end());
  std::stable_sort(terms.begin(), terms.end(), [](auto& a, auto& b) {
    return pmono_total(a.first) < pmono_total(b.first);
  });
  std::string out;
  bool first = true;
  for (auto& [m, v] : terms) {
    mpq_class av = abs(v);
    std::string body;
    std::string ms = pmono_str(m);
    if (ms.empty()) {
      body = av.get_str();
    } else if (av == 1) {
      body = ms;
    } else {
      body = av.get_str() + "*" + ms;
    }
    if (first) {
      out += (v < 0 ? "-" : "") + body;
      first = false;
    } else {
      out += (v < 0 ? " - " : " + ") + body;
    }
  }
  return out;
}

// ----------------------------------------------------------------------------
// F_p polynomials
// ----------------------------------------------------------------------------

namespace {

long mod_p(long v, long p) {
  long r = v % p;
  return r < 0 ? r + p : r;
}

}  // namespace

FpPoly FpPoly::constant(long p, long v) {
  FpPoly f{p, {mod_p(v, p)}};
  f.normalize();
  return f;
}

FpPoly FpPoly::var(long p) { return FpPoly{p, {0, 1}}; }

void FpPoly::normalize() {
  for (auto& v : c) v = mod_p(v, p);
  while (!c.empty() && c.back() == 0) c.pop_back();
}

FpPoly operator+(const FpPoly& a, const FpPoly& b) {
  FpPoly r{a.p, {}};
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  r.normalize();
  return r;
}

FpPoly operator-(const FpPoly& a, const FpPoly& b) {
  FpPoly r{a.p, {}};
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
  r.normalize();
  return r;
}

FpPoly operator*(const FpPoly& a, const FpPoly& b) {
  if (a.is_zero() || b.is_zero()) return FpPoly::zero(a.p);
  FpPoly r{a.p, {}};
  r.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) {
      r.c[i + j] = (r.c[i + j] + a.c[i] * b.c[j]) % a.p;
    }
  }
  r.normalize();
  return r;
}

FpPoly FpPoly::operator-() const {
  FpPoly r = *this;
  for (auto& v : r.c) v = mod_p(-v, p);
  return r;
}

bool FpPoly::operator<(const FpPoly& o) const {
  if (c.size() != o.c.size()) return c.size() < o.c.size();
  for (size_t i = c.size(); i-- > 0;)
    if (c[i] != o.c[i]) return c[i] < o.c[i];
  return false;
}

FpPoly FpPoly::scaled(long s) const {
  FpPoly r = *this;
  s = mod_p(s, p);
  for (auto& v : r.c) v = (v * s) % p;
  r.normalize();
  return r;
}

long FpPoly::eval(long x) const {
  long v = 0;
  x = mod_p(x, p);
  for (size_t i = c.size(); i-- > 0;) v = (v * x + c[i]) % p;
  return v;
}

std::string FpPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::string out;
  for (size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(c[i]);
    } else {
      if (c[i] != 1) out += std::to_string(c[i]);
      out += var;
      if (i >= 2) out += "^" + std::to_string(i);
    }
  }
  return out;
}

std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b) {
  if (b.is_zero()) throw NotInvertible("polynomial division by zero");
  long p = a.p;
  FpPoly rem = a;
  FpPoly quot{p, {}};
  if (rem.degree() >= b.degree())
    quot.c.assign(static_cast<size_t>(rem.degree() - b.degree()) + 1, 0);
  long lead_inv = fp_inv_scalar(b.leading(), p);
  while (!rem.is_zero() && rem.degree() >= b.degree()) {
    int shift = rem.degree() - b.degree();
    long coef = (rem.leading() * lead_inv) % p;
    quot.c[static_cast<size_t>(shift)] = coef;
    for (size_t i = 0; i < b.c.size(); ++i) {
      size_t k = i + static_cast<size_t>(shift);
      rem.c[k] = mod_p(rem.c[k] - coef * b.c[i], p);
    }
    rem.normalize();
  }
  quot.normalize();
  return {quot, rem};
}

FpPoly fp_gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    auto [q, r] = fp_divmod(a, b);
    a = b;
    b = r;
  }
  if (!a.is_zero()) a = a.scaled(fp_inv_scalar(a.leading(), a.p));
  return a;
}

FpPoly fp_pow_mod(const FpPoly& a, const mpz_class& e, const FpPoly& mod) {
  FpPoly base = fp_divmod(a, mod).second;
  FpPoly r = FpPoly::constant(a.p, 1);
  mpz_class k = e;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) r = fp_divmod(r * base, mod).second;
    base = fp_divmod(base * base, mod).second;
    k >>= 1;
  }
  return r;
}

FpPoly fp_inv_mod(const FpPoly& a, const FpPoly& mod) {
  // extended Euclid: find u with u*a = gcd (mod `mod`)
  long p = a.p;
  FpPoly r0 = mod, r1 = fp_divmod(a, mod).second;
  FpPoly s0 = FpPoly::zero(p), s1 = FpPoly::constant(p, 1);
  while (!r1.is_zero()) {
    auto [q, r2] = fp_divmod(r0, r1);
    FpPoly s2 = s0 - q * s1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  if (r0.degree() != 0)
    throw NotInvertible("element is not invertible modulo " + mod.str("x"));
  return s0.scaled(fp_inv_scalar(r0.leading(), p));
}

long fp_inv_scalar(long a, long p) {
  a = mod_p(a, p);
  if (a == 0) throw NotInvertible("division by zero in prime field");
  long t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    long q = r / new_r;
    std::swap(t -= q * new_t, new_t);
    std::swap(r -= q * new_r, new_r);
  }
  return mod_p(t, p);
}

RatFun rat_make(FpPoly num, FpPoly den) {
  if (den.is_zero()) throw NotInvertible("rational function with zero denominator");
  if (num.is_zero()) return RatFun{FpPoly::zero(num.p), FpPoly::constant(den.p, 1)};
  FpPoly g = fp_gcd(num, den);
  num = fp_divmod(num, g).first;
  den = fp_divmod(den, g).first;
  long s = fp_inv_scalar(den.leading(), den.p);
  return RatFun{num.scaled(s), den.scaled(s)};
}

// ----------------------------------------------------------------------------
// Ring construction
// ----------------------------------------------------------------------------

bool Ring::is_field() const {
  switch (kind) {
    case RingKind::PrimeField:
    case RingKind::GaloisField:
    case RingKind::RationalFunctions:
      return true;
    case RingKind::IntegersModPrimePower:
      return n_exp == 1;
    case RingKind::PolyOverPrimeField:
      return false;
  }
  return false;
}

std::string Ring::describe() const {
  switch (kind) {
    case RingKind::IntegersModPrimePower:
      return "Z/" + modulus.get_str();
    case RingKind::PrimeField:
      return "F_" + std::to_string(p);
    case RingKind::GaloisField: {
      long q = 1;
      for (int i = 0; i < ext; ++i) q *= p;
      return "F_" + std::to_string(q);
    }
    case RingKind::PolyOverPrimeField:
      return "F_" + std::to_string(p) + "[" + param + "]";
    case RingKind::RationalFunctions:
      return "F_" + std::to_string(p) + "(" + param + ")";
  }
  return "?";
}

bool Ring::operator==(const Ring& o) const {
  return kind == o.kind && p == o.p && n_exp == o.n_exp && ext == o.ext &&
         gf_modulus == o.gf_modulus && param == o.param &&
         mpz_cmp(modulus.get_mpz_t(), o.modulus.get_mpz_t()) == 0;
}

namespace {

void check_prime(long p) {
  if (p >= (1L << 20)) throw UnsupportedRing("prime too large: " + std::to_string(p));
  if (!is_prime(p)) throw UnsupportedRing("not a prime: " + std::to_string(p));
}

}  // namespace

Ring ring_zmod(long p, int N) {
  check_prime(p);
  if (N < 1) throw UnsupportedRing("modulus exponent must be >= 1");
  Ring R;
  R.kind = RingKind::IntegersModPrimePower;
  R.p = p;
  R.n_exp = N;
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(p),
                static_cast<unsigned long>(N));
  R.modulus = m;
  return R;
}

Ring ring_fp(long p) {
  check_prime(p);
  Ring R;
  R.kind = RingKind::PrimeField;
  R.p = p;
  R.modulus = p;
  return R;
}

Ring ring_gf(long p, int e) {
  check_prime(p);
  if (e == 1) return ring_fp(p);
  if (e < 1 || e > 3) throw UnsupportedRing("extension degree must be 1..3");
  Ring R;
  R.kind = RingKind::GaloisField;
  R.p = p;
  R.ext = e;
  R.modulus = p;
  static const std::map<std::pair<long, int>, std::vector<long>> table = {
      {{2, 2}, {1, 1, 1}},    {{2, 3}, {1, 1, 0, 1}}, {{3, 2}, {1, 0, 1}},
      {{3, 3}, {1, 2, 0, 1}}, {{5, 2}, {2, 0, 1}},    {{5, 3}, {1, 1, 0, 1}},
      {{7, 2}, {1, 0, 1}},    {{7, 3}, {2, 0, 0, 1}},
  };
  auto it = table.find({p, e});
  if (it != table.end()) {
    R.gf_modulus = it->second;
    return R;
  }
  // Deterministic fallback: smallest monic polynomial (by ascending integer
  // encoding of the sub-leading coefficients) without a root in F_p. For
  // degrees 2 and 3, rootless is equivalent to irreducible.
  long count = 1;
  for (int i = 0; i < e; ++i) count *= p;
  for (long code = 0; code < count; ++code) {
    std::vector<long> cs(static_cast<size_t>(e) + 1, 0);
    long v = code;
    for (int i = 0; i < e; ++i) {
      cs[static_cast<size_t>(i)] = v % p;
      v /= p;
    }
    cs[static_cast<size_t>(e)] = 1;
    FpPoly f{p, cs};
    bool has_root = false;
    for (long x = 0; x < p && !has_root; ++x)
      if (f.eval(x) == 0) has_root = true;
    if (!has_root) {
      R.gf_modulus = cs;
      return R;
    }
  }
  throw UnsupportedRing("no irreducible modulus found");
}

Ring ring_poly(long p, const std::string& param) {
  check_prime(p);
  if (param.empty()) throw UnsupportedRing("empty parameter name");
  Ring R;
  R.kind = RingKind::PolyOverPrimeField;
  R.p = p;
  R.param = param;
  R.modulus = p;
  return R;
}

Ring ring_ratfun(long p, const std::string& param) {
  Ring R = ring_poly(p, param);
  R.kind = RingKind::RationalFunctions;
  return R;
}

// ----------------------------------------------------------------------------
// Ring element operations
// ----------------------------------------------------------------------------

namespace {

mpz_class z_mod(const mpz_class& v, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  return r;
}

const mpz_class& as_z(const RElem& a) { return std::get<mpz_class>(a); }
const FpPoly& as_fp(const RElem& a) { return std::get<FpPoly>(a); }
const RatFun& as_rf(const RElem& a) { return std::get<RatFun>(a); }

FpPoly gf_modpoly(const Ring& R) { return FpPoly{R.p, R.gf_modulus}; }

FpPoly gf_reduce(const Ring& R, const FpPoly& f) {
  return fp_divmod(f, gf_modpoly(R)).second;
}

}  // namespace

RElem r_zero(const Ring& R) {
  switch (R.kind) {
    case RingKind::IntegersModPrimePower:
    case RingKind::PrimeField:
      return mpz_class(0);
    case RingKind::GaloisField:
    case RingKind::PolyOverPrimeField:
      return FpPoly::zero(R.p);
    case RingKind::RationalFunctions:
      return RatFun{FpPoly::zero(R.p), FpPoly::constant(R.p, 1)};
  }
  throw UnsupportedRing("bad ring kind");
}

RElem r_one(const Ring& R) { return r_from_int(R, 1); }

RElem r_from_int(const Ring& R, const mpz_class& v) {
  switch (R.kind) {
    case RingKind::IntegersModPrimePower:
    case RingKind::PrimeField:
      return z_mod(v, R.modulus);
    case RingKind::GaloisField:
    case RingKind::PolyOverPrimeField: {
      mpz_class r = z_mod(v, mpz_class(R.p));
      return FpPoly::constant(R.p, r.get_si());
    }
    case RingKind::RationalFunctions: {
      mpz_class r = z_mod(v, mpz_class(R.p));
      return RatFun{FpPoly::constant(R.p, r.get_si()), FpPoly::constant(R.p, 1)};
    }
  }
  throw UnsupportedRing("bad ring kind");
}

RElem r_add(const Ring& R, const RElem& a, const RElem& b) {
  switch (R.kind) {
    case RingKind::IntegersModPrimePower:
    case RingKind::PrimeField:
      return z_mod(as_z(a) + as_z(b), R.modulus);
    case RingKind::GaloisField:
    case RingKind::PolyOverPrimeField:
      return as_fp(a) + as_fp(b);
    case RingKind::RationalFunctions: {
      const RatFun &x = as_rf(a), &y = as_rf(b);
      return rat_make(x.num * y.den + y.num * x.den, x.den * y.den);
    }
  }
  throw UnsupportedRing("bad ring kind");
}

RElem r_sub(const Ring& R, const RElem& a, const RElem& b) {
  return r_add(R, a, r_neg(R, b));
}

RElem r_mul(const Ring& R, const RElem& a, const RElem& b) {
  switch (R.kind) {
    case RingKind::IntegersModPrimePower:
    case RingKind::PrimeField:
      return z_mod(as_z(a) * as_z(b), R.modulus);
    case RingKind::GaloisField:
      return gf_reduce(R, as_fp(a) * as_fp(b));
    case RingKind::PolyOverPrimeField:
      return as_fp(a) * as_fp(b);
    case RingKind::RationalFunctions: {
      const RatFun &x = as_rf(a), &y = as_rf(b);
      return rat_make(x.num * y.num, x.den * y.den);
    }
  }
  throw UnsupportedRing("bad ring kind");
}

RElem r_neg(const Ring& R, const RElem& a) {
  switch (R.kind) {
    case RingKind::IntegersModPrimePower:
    case RingKind::PrimeField:
      return z_mod(-as_z(a), R.modulus);
    case RingKind::GaloisField:
    case RingKind::PolyOverPrimeField:
      return -as_fp(a);
    case RingKind::RationalFunctions:
      return RatFun{-as_rf(a).num, as_rf(a).den};
  }
  throw UnsupportedRing("bad ring kind");
}

RElem r_pow(const Ring& R, RElem a, unsigned e) {
  RElem r = r_one(R);
  while (e) {
    if (e & 1u) r = r_mul(R, r, a);
    a = r_mul(R, a, a);
    e >>= 1u;
  }
  return r;
}

bool r_is_zero(const Ring& R, const RElem& a) {
  switch (R.kind) {
    case RingKind::IntegersModPrimePower:
    case RingKind::PrimeField:
      return as_z(a) == 0;
    case RingKind::GaloisField:
    case RingKind::PolyOverPrimeField:
      return as_fp(a).is_zero();
    case RingKind::RationalFunctions:
      return as_rf(a).num.is_zero();
  }
  throw UnsupportedRing("bad ring kind");
}

bool r_eq(const Ring& R, const RElem& a, const RElem& b) {
  return r_is_zero(R, r_sub(R, a, b));
}

bool r_is_unit(const Ring& R, const RElem& a) {
  switch (R.kind) {
    case RingKind::IntegersModPrimePower:
      return !mpz_divisible_ui_p(as_z(a).get_mpz_t(),
                                 static_cast<unsigned long>(R.p));
    case RingKind::PrimeField:
      return as_z(a) != 0;
    case RingKind::GaloisField:
      return !as_fp(a).is_zero();
    case RingKind::PolyOverPrimeField:
      return as_fp(a).degree() == 0;
    case RingKind::RationalFunctions:
      return !as_rf(a).num.is_zero();
  }
  throw UnsupportedRing("bad ring kind");
}

RElem r_inv(const Ring& R, const RElem& a) {
  switch (R.kind) {
    case RingKind::IntegersModPrimePower:
    case RingKind::PrimeField: {
      mpz_class r;
      if (mpz_invert(r.get_mpz_t(), as_z(a).get_mpz_t(), R.modulus.get_mpz_t()) == 0)
        throw NotInvertible("not a unit in " + R.describe() + ": " + r_str(R, a));
      return r;
    }
    case RingKind::GaloisField:
      return fp_inv_mod(as_fp(a), gf_modpoly(R));
    case RingKind::PolyOverPrimeField: {
      const FpPoly& f = as_fp(a);
      if (f.degree() != 0)
        throw NotInvertible("not a unit in " + R.describe() + ": " + r_str(R, a));
      return FpPoly::constant(R.p, fp_inv_scalar(f.c[0], R.p));
    }
    case RingKind::RationalFunctions: {
      const RatFun& f = as_rf(a);
      if (f.num.is_zero())
        throw NotInvertible("division by zero in " + R.describe());
      return rat_make(f.den, f.num);
    }
  }
  throw UnsupportedRing("bad ring kind");
}

RElem r_div(const Ring& R, const RElem& a, const RElem& b) {
  return r_mul(R, a, r_inv(R, b));
}

int r_zmod_valuation(const Ring& R, const RElem& a) {
  if (R.kind != RingKind::IntegersModPrimePower && R.kind != RingKind::PrimeField)
    throw UnsupportedRing("valuation needs Z/p^N");
  int N = (R.kind == RingKind::PrimeField) ? 1 : R.n_exp;
  if (as_z(a) == 0) return N;
  return std::min(N, p_valuation(as_z(a), R.p));
}

RElem reduce_rational(const Ring& R, const mpq_class& q) {
  mpq_class v = q;
  v.canonicalize();
  if (!is_p_integral(v, R.p))
    throw NotPIntegral("denominator of " + v.get_str() +
                       " is not a unit modulo " + std::to_string(R.p));
  RElem num = r_from_int(R, v.get_num());
  RElem den = r_from_int(R, v.get_den());
  return r_mul(R, num, r_inv(R, den));
}

RElem reduce_universal(const Ring& R, const Universal& u,
                       const std::map<std::string, RElem>& bind) {
  RElem acc = r_zero(R);
  for (auto& [mono, coeff] : u.c) {
    RElem term = reduce_rational(R, coeff);
    for (auto& [name, e] : mono) {
      auto it = bind.find(name);
      if (it == bind.end())
        throw UnboundParameter("no value bound for parameter '" + name + "'");
      term = r_mul(R, term, r_pow(R, it->second, static_cast<unsigned>(e)));
    }
    acc = r_add(R, acc, term);
  }
  return acc;
}

namespace {

RElem eval_fp_poly_at(const FpPoly& f, const Ring& target, const RElem& point) {
  RElem v = r_zero(target);
  for (size_t i = f.c.size(); i-- > 0;) {
    v = r_mul(target, v, point);
    v = r_add(target, v, r_from_int(target, f.c[i]));
  }
  return v;
}

}  // namespace

RElem r_specialize(const Ring& R, const RElem& a, const Ring& target,
                   const RElem& point) {
  if (R.p != target.p) throw UnsupportedRing("specialization changes the prime");
  switch (R.kind) {
    case RingKind::PolyOverPrimeField:
      return eval_fp_poly_at(as_fp(a), target, point);
    case RingKind::RationalFunctions: {
      RElem num = eval_fp_poly_at(as_rf(a).num, target, point);
      RElem den = eval_fp_poly_at(as_rf(a).den, target, point);
      if (r_is_zero(target, den))
        throw PoleAtSpecialization("denominator " + as_rf(a).den.str(R.param) +
                                   " vanishes at " + r_str(target, point));
      return r_div(target, num, den);
    }
    case RingKind::PrimeField:
    case RingKind::IntegersModPrimePower:
      return r_from_int(target, as_z(a));
    case RingKind::GaloisField:
      if (R == target) return a;
      throw UnsupportedRing("cannot specialize between distinct field extensions");
  }
  throw UnsupportedRing("bad ring kind");
}

std::string r_str(const Ring& R, const RElem& a) {
  switch (R.kind) {
    case RingKind::IntegersModPrimePower:
    case RingKind::PrimeField:
      return as_z(a).get_str();
    case RingKind::GaloisField:
      return as_fp(a).str(kGfVarName);
    case RingKind::PolyOverPrimeField:
      return as_fp(a).str(R.param);
    case RingKind::RationalFunctions: {
      const RatFun& f = as_rf(a);
      if (f.den == FpPoly::constant(R.p, 1)) return f.num.str(R.param);
      std::string num = f.num.str(R.param);
      std::string den = f.den.str(R.param);
      return "(" + num + ")/(" + den + ")";
    }
  }
  throw UnsupportedRing("bad ring kind");
}

std::vector<RElem> ring_all_elements(const Ring& R) {
  std::vector<RElem> out;
  switch (R.kind) {
    case RingKind::PrimeField:
      for (long v = 0; v < R.p; ++v) out.emplace_back(mpz_class(v));
      return out;
    case RingKind::GaloisField: {
      long count = 1;
      for (int i = 0; i < R.ext; ++i) count *= R.p;
      for (long code = 0; code < count; ++code) {
        FpPoly f{R.p, {}};
        f.c.assign(static_cast<size_t>(R.ext), 0);
        long v = code;
        for (int i = 0; i < R.ext; ++i) {
          f.c[static_cast<size_t>(i)] = v % R.p;
          v /= R.p;
        }
        f.normalize();
        out.emplace_back(std::move(f));
      }
      return out;
    }
    default:
      throw UnsupportedRing("element enumeration needs a finite field");
  }
}

}  // namespace pdcalc
