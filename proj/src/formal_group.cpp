#include "pdcalc/formal_group.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pdcalc {

namespace {

int vec_total(const std::vector<int>& e) {
  int t = 0;
  for (int x : e) t += x;
  return t;
}

void check_compatible(const Series& a, const Series& b) {
  if (a.nvars != b.nvars)
    throw CalcError("series operands have different variable counts");
}

}  // namespace

// ----------------------------------------------------------------------------
// Series primitives.
// ----------------------------------------------------------------------------

Series series_zero(int nvars, int trunc) {
  Series s;
  s.nvars = nvars;
  s.trunc = trunc;
  return s;
}

Series series_const(int nvars, int trunc, const Universal& u) {
  Series s = series_zero(nvars, trunc);
  if (!u.is_zero()) s.c[std::vector<int>(nvars, 0)] = u;
  return s;
}

Series series_var(int nvars, int trunc, int i) {
  if (i < 0 || i >= nvars) throw CalcError("series variable index out of range");
  Series s = series_zero(nvars, trunc);
  if (trunc >= 1) {
    std::vector<int> e(nvars, 0);
    e[i] = 1;
    s.c[e] = Universal::one();
  }
  return s;
}

bool series_is_zero(const Series& s) { return s.c.empty(); }

Universal series_coeff(const Series& s, const std::vector<int>& e) {
  auto it = s.c.find(e);
  return it == s.c.end() ? Universal::zero() : it->second;
}

void series_set(Series& s, const std::vector<int>& e, const Universal& v) {
  if (static_cast<int>(e.size()) != s.nvars)
    throw CalcError("exponent vector length mismatch");
  if (v.is_zero() || vec_total(e) > s.trunc)
    s.c.erase(e);
  else
    s.c[e] = v;
}

int series_low_degree(const Series& s) {
  int low = s.trunc + 1;
  for (auto& [e, v] : s.c) low = std::min(low, vec_total(e));
  return low;
}

Series series_add(const Series& a, const Series& b) {
  check_compatible(a, b);
  Series r = a;
  r.trunc = std::min(a.trunc, b.trunc);
  for (auto& [e, v] : b.c) {
    auto it = r.c.find(e);
    if (it == r.c.end()) {
      r.c[e] = v;
    } else {
      it->second += v;
      if (it->second.is_zero()) r.c.erase(it);
    }
  }
  for (auto it = r.c.begin(); it != r.c.end();)
    it = (vec_total(it->first) > r.trunc) ? r.c.erase(it) : std::next(it);
  return r;
}

Series series_neg(const Series& a) {
  Series r = a;
  for (auto& [e, v] : r.c) v = -v;
  return r;
}

Series series_sub(const Series& a, const Series& b) {
  return series_add(a, series_neg(b));
}

Series series_scale(const Series& a, const Universal& u) {
  Series r = series_zero(a.nvars, a.trunc);
  if (u.is_zero()) return r;
  for (auto& [e, v] : a.c) {
    Universal w = v * u;
    if (!w.is_zero()) r.c[e] = w;
  }
  return r;
}

Series series_mul(const Series& a, const Series& b) {
  check_compatible(a, b);
  Series r = series_zero(a.nvars, std::min(a.trunc, b.trunc));
  for (auto& [ea, va] : a.c) {
    int ta = vec_total(ea);
    for (auto& [eb, vb] : b.c) {
      if (ta + vec_total(eb) > r.trunc) continue;
      std::vector<int> e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      Universal w = va * vb;
      if (w.is_zero()) continue;
      auto it = r.c.find(e);
      if (it == r.c.end()) {
        r.c[e] = w;
      } else {
        it->second += w;
        if (it->second.is_zero()) r.c.erase(it);
      }
    }
  }
  return r;
}

Series series_pow(const Series& a, int k) {
  if (k < 0) throw CalcError("negative series power");
  Series r = series_const(a.nvars, a.trunc, Universal::one());
  for (int i = 0; i < k; ++i) r = series_mul(r, a);
  return r;
}

Series series_subst(const Series& s, const std::vector<Series>& images,
                    int out_nvars, int out_trunc) {
  if (static_cast<int>(images.size()) != s.nvars)
    throw CalcError("substitution needs one image per variable");
  for (auto& img : images) {
    if (img.nvars != out_nvars)
      throw CalcError("substitution image has wrong variable count");
    if (!series_coeff(img, std::vector<int>(out_nvars, 0)).is_zero())
      throw CalcError("substitution image has a constant term");
  }
  // Lazily grown power caches; image low degrees bound the useful exponents.
  std::vector<std::vector<Series>> pw(images.size());
  std::vector<int> low(images.size());
  for (size_t i = 0; i < images.size(); ++i) {
    Series img = images[i];
    img.trunc = std::min(img.trunc, out_trunc);
    for (auto it = img.c.begin(); it != img.c.end();)
      it = (vec_total(it->first) > img.trunc) ? img.c.erase(it)
                                              : std::next(it);
    pw[i].push_back(series_const(out_nvars, out_trunc, Universal::one()));
    pw[i].push_back(img);
    low[i] = std::max(1, series_low_degree(img));
  }
  Series r = series_zero(out_nvars, out_trunc);
  for (auto& [e, v] : s.c) {
    long min_deg = 0;
    for (size_t i = 0; i < images.size(); ++i) min_deg += (long)e[i] * low[i];
    if (min_deg > out_trunc) continue;
    Series term = series_const(out_nvars, out_trunc, v);
    for (size_t i = 0; i < images.size(); ++i) {
      while (static_cast<int>(pw[i].size()) <= e[i])
        pw[i].push_back(series_mul(pw[i].back(), pw[i][1]));
      if (e[i] > 0) term = series_mul(term, pw[i][e[i]]);
    }
    r = series_add(r, term);
  }
  return r;
}

Series series_inv_unit(const Series& b) {
  Universal u0 = series_coeff(b, std::vector<int>(b.nvars, 0));
  if (!u0.is_constant() || u0.is_zero())
    throw NotInvertible("series constant term is not an invertible rational");
  mpq_class inv0 = 1 / u0.constant_value();
  // 1/b = inv0 * sum_k g^k with g = 1 - inv0*b (low degree >= 1).
  Series one = series_const(b.nvars, b.trunc, Universal::one());
  Series g = series_sub(one, series_scale(b, Universal::constant(inv0)));
  Series acc = one;
  Series sum = one;
  for (int k = 1; k <= b.trunc; ++k) {
    acc = series_mul(acc, g);
    if (series_is_zero(acc)) break;
    sum = series_add(sum, acc);
  }
  return series_scale(sum, Universal::constant(inv0));
}

std::string series_str(const Series& s,
                       const std::vector<std::string>& names) {
  if (static_cast<int>(names.size()) != s.nvars)
    throw CalcError("series_str needs one name per variable");
  if (s.c.empty()) return "0";
  std::vector<std::pair<std::vector<int>, Universal>> terms(s.c.begin(),
                                                            s.c.end());
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    int ta = vec_total(a.first), tb = vec_total(b.first);
    if (ta != tb) return ta < tb;
    return a.first > b.first;
  });
  std::ostringstream os;
  bool first = true;
  for (auto& [e, v] : terms) {
    std::string cs = v.str();
    bool multi = cs.find(" + ") != std::string::npos ||
                 cs.find(" - ") != std::string::npos;
    std::ostringstream mono;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (mono.tellp() > 0) mono << "*";
      mono << names[i];
      if (e[i] > 1) mono << "^" << e[i];
    }
    std::string ms = mono.str();
    std::string piece;
    if (ms.empty()) {
      piece = multi ? "(" + cs + ")" : cs;
    } else if (cs == "1") {
      piece = ms;
    } else if (cs == "-1") {
      piece = "-" + ms;
    } else if (multi) {
      piece = "(" + cs + ")*" + ms;
    } else {
      piece = cs + "*" + ms;
    }
    if (first) {
      os << piece;
      first = false;
    } else if (piece.size() > 1 && piece[0] == '-') {
      os << " - " << piece.substr(1);
    } else {
      os << " + " << piece;
    }
  }
  return os.str();
}

// ----------------------------------------------------------------------------
// Law constructors.
// ----------------------------------------------------------------------------

std::string group_law_kind_name(GroupLawKind k) {
  switch (k) {
    case GroupLawKind::Additive: return "additive";
    case GroupLawKind::Multiplicative: return "multiplicative";
    case GroupLawKind::EllipticLegendre: return "legendre";
    case GroupLawKind::EllipticWeierstrass: return "weierstrass";
  }
  throw UnsupportedKind("unknown group law kind");
}

GroupLaw make_additive(int trunc) {
  GroupLaw G;
  G.kind = GroupLawKind::Additive;
  G.trunc = trunc;
  G.F = series_add(series_var(2, trunc, 0), series_var(2, trunc, 1));
  G.inverse = series_neg(series_var(1, trunc, 0));
  G.weq = series_zero(1, trunc);
  G.coordinate = "t";
  return G;
}

GroupLaw make_multiplicative(int trunc) {
  GroupLaw G;
  G.kind = GroupLawKind::Multiplicative;
  G.trunc = trunc;
  Series x = series_var(2, trunc, 0);
  Series y = series_var(2, trunc, 1);
  G.F = series_add(series_add(x, y), series_mul(x, y));
  // Inverse of s is -s/(1+s) = sum_{k>=1} (-1)^k s^k.
  G.inverse = series_zero(1, trunc);
  for (int k = 1; k <= trunc; ++k) {
    std::vector<int> e = {k};
    G.inverse.c[e] = Universal::constant(k % 2 == 0 ? 1 : -1);
  }
  G.weq = series_zero(1, trunc);
  G.coordinate = "s";
  return G;
}

namespace {

struct CurveCoeffs {
  Universal a1, a2, a3, a4, a6;
};

// Solve w = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3 by fixpoint
// iteration at truncation `tw`; each step is exact one degree further.
Series solve_curve_w(const CurveCoeffs& a, int tw) {
  Series z = series_var(1, tw, 0);
  Series z2 = series_pow(z, 2);
  Series z3 = series_pow(z, 3);
  Series w = series_zero(1, tw);
  for (int it = 0; it <= tw + 8; ++it) {
    Series w2 = series_mul(w, w);
    Series rhs = z3;
    rhs = series_add(rhs, series_scale(series_mul(z, w), a.a1));
    rhs = series_add(rhs, series_scale(series_mul(z2, w), a.a2));
    rhs = series_add(rhs, series_scale(w2, a.a3));
    rhs = series_add(rhs, series_scale(series_mul(z, w2), a.a4));
    rhs = series_add(rhs, series_scale(series_mul(w2, w), a.a6));
    if (rhs == w) return w;
    w = rhs;
  }
  throw PrecisionUnreachable("curve expansion did not stabilize");
}

// Chord construction: the line through (z1, w(z1)) and (z2, w(z2)) meets the
// curve in a third point whose z-coordinate is -B/A - z1 - z2; applying the
// formal inverse yields F(z1, z2).
GroupLaw chord_law(GroupLawKind kind, const CurveCoeffs& a,
                   std::vector<std::string> params, int trunc) {
  const int tw = trunc + 4;
  GroupLaw G;
  G.kind = kind;
  G.trunc = trunc;
  G.params = std::move(params);
  G.coordinate = "z";
  G.weq = solve_curve_w(a, tw);

  // Slope of the chord: the divided difference (w(z2) - w(z1))/(z2 - z1).
  Series s = series_zero(2, trunc);
  for (auto& [e, psi] : G.weq.c) {
    int k = e[0];
    if (k - 1 > trunc) continue;
    for (int i = 0; i + 1 <= k; ++i) {
      std::vector<int> m = {i, k - 1 - i};
      auto it = s.c.find(m);
      if (it == s.c.end()) {
        s.c[m] = psi;
      } else {
        it->second += psi;
        if (it->second.is_zero()) s.c.erase(it);
      }
    }
  }
  Series z1 = series_var(2, trunc, 0);
  Series z2 = series_var(2, trunc, 1);
  Series w1 = series_subst(G.weq, {z1}, 2, trunc);
  Series c = series_sub(w1, series_mul(s, z1));

  Series s2 = series_mul(s, s);
  Series sc = series_mul(s, c);
  Series A = series_const(2, trunc, Universal::one());
  A = series_add(A, series_scale(s, a.a2));
  A = series_add(A, series_scale(s2, a.a4));
  A = series_add(A, series_scale(series_mul(s2, s), a.a6));
  Series B = series_scale(s, a.a1);
  B = series_add(B, series_scale(c, a.a2));
  B = series_add(B, series_scale(s2, a.a3));
  B = series_add(B, series_scale(sc, a.a4 + a.a4));
  B = series_add(B, series_scale(series_mul(s, sc),
                                 a.a6 + a.a6 + a.a6));
  Series sum_roots = series_neg(series_mul(B, series_inv_unit(A)));
  Series zthird = series_sub(series_sub(sum_roots, z1), z2);

  // Formal inverse on the curve: i(z) = -z / (1 - a1 z - a3 w(z)).
  Series zz = series_var(1, trunc, 0);
  Series wz = G.weq;
  wz.trunc = trunc;
  for (auto it = wz.c.begin(); it != wz.c.end();)
    it = (it->first[0] > trunc) ? wz.c.erase(it) : std::next(it);
  Series den = series_const(1, trunc, Universal::one());
  den = series_sub(den, series_scale(zz, a.a1));
  den = series_sub(den, series_scale(wz, a.a3));
  G.inverse = series_neg(series_mul(zz, series_inv_unit(den)));

  G.F = series_subst(G.inverse, {zthird}, 2, trunc);
  return G;
}

}  // namespace

GroupLaw make_legendre(int trunc) {
  Universal lam = Universal::param("lam");
  CurveCoeffs a;
  a.a1 = Universal::zero();
  a.a2 = -(Universal::one() + lam);
  a.a3 = Universal::zero();
  a.a4 = lam;
  a.a6 = Universal::zero();
  return chord_law(GroupLawKind::EllipticLegendre, a, {"lam"}, trunc);
}

GroupLaw make_weierstrass(int trunc) {
  CurveCoeffs a;
  a.a1 = Universal::param("a1");
  a.a2 = Universal::param("a2");
  a.a3 = Universal::param("a3");
  a.a4 = Universal::param("a4");
  a.a6 = Universal::param("a6");
  return chord_law(GroupLawKind::EllipticWeierstrass, a,
                   {"a1", "a2", "a3", "a4", "a6"}, trunc);
}

GroupLaw specialize_params(const GroupLaw& G,
                           const std::map<std::string, Universal>& images) {
  auto apply = [&](const Series& s) {
    Series r = series_zero(s.nvars, s.trunc);
    for (auto& [e, v] : s.c) {
      Universal w = universal_subst(v, images);
      if (!w.is_zero()) r.c[e] = w;
    }
    return r;
  };
  GroupLaw H;
  H.kind = G.kind;
  H.trunc = G.trunc;
  H.F = apply(G.F);
  H.inverse = apply(G.inverse);
  H.weq = apply(G.weq);
  H.coordinate = G.coordinate;
  std::set<std::string> names;
  for (const Series* s : {&H.F, &H.inverse, &H.weq})
    for (auto& [e, v] : s->c)
      for (auto& [m, q] : v.c)
        for (auto& [name, deg] : m) names.insert(name);
  H.params.assign(names.begin(), names.end());
  return H;
}

Universal law_coeff(const GroupLaw& G, int i, int j) {
  return series_coeff(G.F, {i, j});
}

GroupLaw scale_coordinate(const GroupLaw& G, const std::string& s) {
  Universal sv = Universal::param(s);
  auto weight = [&](const Series& ser, int shift) {
    Series r = series_zero(ser.nvars, ser.trunc);
    for (auto& [e, v] : ser.c) {
      int total = 0;
      for (int x : e) total += x;
      if (total + shift < 0)
        throw CalcError("scale_coordinate: series has terms below the "
                        "expected leading degree");
      r.c[e] = v * sv.pow(static_cast<unsigned>(total + shift));
    }
    return r;
  };
  GroupLaw H = G;
  H.F = weight(G.F, -1);
  H.inverse = weight(G.inverse, -1);
  H.weq = G.weq.c.empty() ? G.weq : weight(G.weq, -3);
  if (std::find(H.params.begin(), H.params.end(), s) == H.params.end())
    H.params.push_back(s);
  return H;
}

// ----------------------------------------------------------------------------
// Axiom checks.
// ----------------------------------------------------------------------------

bool check_unit(const GroupLaw& G) {
  Series z = series_var(1, G.trunc, 0);
  Series zero1 = series_zero(1, G.trunc);
  return series_subst(G.F, {z, zero1}, 1, G.trunc) == z &&
         series_subst(G.F, {zero1, z}, 1, G.trunc) == z;
}

bool check_commutative(const GroupLaw& G) {
  Series x = series_var(2, G.trunc, 0);
  Series y = series_var(2, G.trunc, 1);
  return series_subst(G.F, {y, x}, 2, G.trunc) == G.F;
}

bool check_associative(const GroupLaw& G, int degree) {
  int d = std::min(degree, G.trunc);
  Series x = series_var(3, d, 0);
  Series y = series_var(3, d, 1);
  Series z = series_var(3, d, 2);
  Series fxy = series_subst(G.F, {x, y}, 3, d);
  Series fyz = series_subst(G.F, {y, z}, 3, d);
  Series left = series_subst(G.F, {fxy, z}, 3, d);
  Series right = series_subst(G.F, {x, fyz}, 3, d);
  return left == right;
}

bool check_inverse(const GroupLaw& G) {
  Series z = series_var(1, G.trunc, 0);
  return series_is_zero(series_subst(G.F, {z, G.inverse}, 1, G.trunc));
}

bool check_odd(const GroupLaw& G) {
  Series z = series_var(1, G.trunc, 0);
  if (!(G.inverse == series_neg(z))) return false;
  Series x = series_var(2, G.trunc, 0);
  Series y = series_var(2, G.trunc, 1);
  return series_subst(G.F, {series_neg(x), series_neg(y)}, 2, G.trunc) ==
         series_neg(G.F);
}

}  // namespace pdcalc
