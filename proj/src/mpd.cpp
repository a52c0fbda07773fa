#include "pdcalc/mpd.hpp"

#include <algorithm>

namespace pdcalc {

PdCtx make_pd_ctx(const PrimeLevel& pl, int n, int r, int trunc,
                  bool with_coeff_vars) {
  if (n < 1) throw CalcError("need at least one variable per slot");
  if (r < 0) throw CalcError("negative slot count");
  if (trunc < 0) throw CalcError("negative truncation");
  PdCtx ctx;
  ctx.pl = pl;
  ctx.n = n;
  ctx.r = r;
  ctx.trunc = trunc;
  ctx.with_coeff_vars = with_coeff_vars;
  return ctx;
}

int PdMono::total() const {
  int s = 0;
  for (int v : t) s += v;
  for (int v : e) s += v;
  return s;
}

int PdMono::fil() const {
  int s = 0;
  for (int v : e) s += v;
  return s;
}

int PdMono::slot_degree(int s, int n) const {
  int d = 0;
  for (int v = 0; v < n; ++v) d += e[static_cast<size_t>(s * n + v)];
  return d;
}

bool PdMono::all_slots_positive(int r, int n) const {
  for (int s = 0; s < r; ++s)
    if (slot_degree(s, n) == 0) return false;
  return true;
}

bool PdMono::exceeds_slot_cap(int r, int n, int cap) const {
  for (int s = 0; s < r; ++s)
    if (slot_degree(s, n) > cap) return true;
  return false;
}

bool PdMono::operator<(const PdMono& o) const {
  int ta = total(), tb = o.total();
  if (ta != tb) return ta < tb;
  // larger flattened exponent vector first
  for (size_t i = 0; i < t.size(); ++i)
    if (t[i] != o.t[i]) return t[i] > o.t[i];
  for (size_t i = 0; i < e.size(); ++i)
    if (e[i] != o.e[i]) return e[i] > o.e[i];
  return false;
}

PdMono mono_one(const PdCtx& ctx) {
  PdMono m;
  if (ctx.with_coeff_vars) m.t.assign(static_cast<size_t>(ctx.n), 0);
  m.e.assign(static_cast<size_t>(ctx.r * ctx.n), 0);
  return m;
}

PdElt elt_zero(const PdCtx&) { return PdElt{}; }

PdElt elt_one(const PdCtx& ctx) {
  PdElt x;
  x.c.emplace(mono_one(ctx), Universal::one());
  return x;
}

PdElt elt_mono(const PdCtx& ctx, PdMono m, Universal coeff) {
  PdElt x;
  if (!coeff.is_zero() && m.total() <= ctx.trunc)
    x.c.emplace(std::move(m), std::move(coeff));
  return x;
}

PdElt elt_slot_var(const PdCtx& ctx, int slot, int var) {
  if (slot < 0 || slot >= ctx.r || var < 0 || var >= ctx.n)
    throw CalcError("slot variable out of range");
  PdMono m = mono_one(ctx);
  m.e[static_cast<size_t>(slot * ctx.n + var)] = 1;
  return elt_mono(ctx, m, Universal::one());
}

PdElt elt_coeff_var(const PdCtx& ctx, int var) {
  if (!ctx.with_coeff_vars) throw CalcError("context has no coefficient variables");
  if (var < 0 || var >= ctx.n) throw CalcError("coefficient variable out of range");
  PdMono m = mono_one(ctx);
  m.t[static_cast<size_t>(var)] = 1;
  return elt_mono(ctx, m, Universal::one());
}

PdElt elt_add(const PdCtx&, const PdElt& a, const PdElt& b) {
  PdElt r = a;
  for (auto& [m, v] : b.c) {
    auto it = r.c.find(m);
    if (it == r.c.end()) {
      r.c.emplace(m, v);
    } else {
      it->second += v;
      if (it->second.is_zero()) r.c.erase(it);
    }
  }
  return r;
}

PdElt elt_sub(const PdCtx& ctx, const PdElt& a, const PdElt& b) {
  return elt_add(ctx, a, elt_neg(ctx, b));
}

PdElt elt_neg(const PdCtx&, const PdElt& a) {
  PdElt r;
  for (auto& [m, v] : a.c) r.c.emplace(m, -v);
  return r;
}

PdElt elt_scale(const PdCtx&, const PdElt& a, const Universal& s) {
  PdElt r;
  if (s.is_zero()) return r;
  for (auto& [m, v] : a.c) {
    Universal w = v * s;
    if (!w.is_zero()) r.c.emplace(m, std::move(w));
  }
  return r;
}

PdElt elt_scale_q(const PdCtx& ctx, const PdElt& a, const mpq_class& s) {
  return elt_scale(ctx, a, Universal::constant(s));
}

PdElt elt_mul(const PdCtx& ctx, const PdElt& a, const PdElt& b) {
  PdElt r;
  for (auto& [ma, va] : a.c)
    for (auto& [mb, vb] : b.c) {
      if (ma.total() + mb.total() > ctx.trunc) continue;
      PdMono m = ma;
      for (size_t i = 0; i < m.t.size(); ++i) m.t[i] += mb.t[i];
      mpq_class factor = 1;
      for (size_t i = 0; i < m.e.size(); ++i) {
        if (mb.e[i] != 0) {
          if (m.e[i] != 0)
            factor *= mpq_class(pd_mul_coeff(ctx.pl, m.e[i], mb.e[i]));
          m.e[i] += mb.e[i];
        }
      }
      Universal term = (va * vb).scaled(factor);
      if (term.is_zero()) continue;
      auto it = r.c.find(m);
      if (it == r.c.end()) {
        r.c.emplace(std::move(m), std::move(term));
      } else {
        it->second += term;
        if (it->second.is_zero()) r.c.erase(it);
      }
    }
  return r;
}

PdElt elt_power(const PdCtx& ctx, const PdElt& x, unsigned k) {
  PdElt r = elt_one(ctx);
  PdElt base = x;
  while (k) {
    if (k & 1u) r = elt_mul(ctx, r, base);
    base = elt_mul(ctx, base, base);
    k >>= 1u;
  }
  return r;
}

PdElt elt_scaled_power(const PdCtx& ctx, const PdElt& x, int k) {
  if (k < 0) throw CalcError("negative scaled power");
  PdElt p = elt_power(ctx, x, static_cast<unsigned>(k));
  mpq_class inv_scale(1, q_factorial(ctx.pl, k));
  inv_scale.canonicalize();
  return elt_scale_q(ctx, p, inv_scale);
}

PdElt pd_substitute(const PdSubst& sub, const PdElt& x) {
  const PdCtx& src = sub.src;
  const PdCtx& dst = sub.dst;
  size_t n_slot_vars = static_cast<size_t>(src.r * src.n);
  if (sub.slot_image.size() != n_slot_vars)
    throw CalcError("substitution image count mismatch");
  if (src.with_coeff_vars &&
      sub.coeff_image.size() != static_cast<size_t>(src.n))
    throw CalcError("substitution coefficient image count mismatch");

  // plain power cache per substituted variable; slot images additionally get
  // the 1/q(k)! scaling applied per use
  std::vector<std::vector<PdElt>> slot_pows(n_slot_vars);
  std::vector<std::vector<PdElt>> coeff_pows(sub.coeff_image.size());
  auto plain_pow = [&](std::vector<PdElt>& cache, const PdElt& base,
                       int k) -> const PdElt& {
    if (cache.empty()) cache.push_back(elt_one(dst));
    while (static_cast<int>(cache.size()) <= k)
      cache.push_back(elt_mul(dst, cache.back(), base));
    return cache[static_cast<size_t>(k)];
  };

  PdElt out = elt_zero(dst);
  for (auto& [m, v] : x.c) {
    PdElt term = elt_mono(dst, mono_one(dst), v);
    for (size_t i = 0; i < m.t.size() && !term.is_zero(); ++i)
      if (m.t[i] > 0)
        term = elt_mul(dst, term, plain_pow(coeff_pows[i], sub.coeff_image[i],
                                            m.t[i]));
    for (size_t i = 0; i < m.e.size() && !term.is_zero(); ++i)
      if (m.e[i] > 0) {
        const PdElt& pw = plain_pow(slot_pows[i], sub.slot_image[i], m.e[i]);
        mpq_class inv_scale(1, q_factorial(src.pl, m.e[i]));
        inv_scale.canonicalize();
        term = elt_mul(dst, term, pw);
        term = elt_scale_q(dst, term, inv_scale);
      }
    out = elt_add(dst, out, term);
  }
  return out;
}

PdElt pd_from_plain(const PdCtx& ctx, const PlainPoly& plain) {
  PdElt out;
  for (auto& [E, c] : plain) {
    if (E.size() != static_cast<size_t>(ctx.r * ctx.n))
      throw CalcError("plain exponent vector has wrong length");
    PdMono m = mono_one(ctx);
    m.e = E;
    if (m.total() > ctx.trunc) continue;
    mpq_class scale = 1;
    for (int v : E) scale *= mpq_class(q_factorial(ctx.pl, v));
    Universal coeff = c.scaled(scale);
    if (!coeff.is_zero()) out.c.emplace(std::move(m), std::move(coeff));
  }
  return out;
}

PlainPoly pd_to_plain(const PdCtx& ctx, const PdElt& x) {
  PlainPoly out;
  for (auto& [m, v] : x.c) {
    for (int tv : m.t)
      if (tv != 0) throw CalcError("plain conversion with coefficient variables");
    mpq_class scale = 1;
    for (int e : m.e) scale *= mpq_class(q_factorial(ctx.pl, e));
    mpq_class inv = 1 / scale;
    Universal coeff = v.scaled(inv);
    if (!coeff.is_zero()) out.emplace(m.e, std::move(coeff));
  }
  return out;
}

namespace {

void enumerate_rec(std::vector<int>& exps, size_t pos, int remaining,
                   std::vector<std::vector<int>>& out) {
  if (pos == exps.size()) {
    out.push_back(exps);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    exps[pos] = v;
    enumerate_rec(exps, pos + 1, remaining - v, out);
  }
  exps[pos] = 0;
}

}  // namespace

std::vector<PdMono> enumerate_monomials(const PdCtx& ctx, int max_total,
                                        bool require_all_slots_positive,
                                        int slot_cap) {
  size_t dim = static_cast<size_t>(ctx.r * ctx.n) +
               (ctx.with_coeff_vars ? static_cast<size_t>(ctx.n) : 0);
  std::vector<int> exps(dim, 0);
  std::vector<std::vector<int>> flat;
  enumerate_rec(exps, 0, std::min(max_total, ctx.trunc), flat);

  std::vector<PdMono> out;
  size_t t_len = ctx.with_coeff_vars ? static_cast<size_t>(ctx.n) : 0;
  for (auto& f : flat) {
    PdMono m;
    m.t.assign(f.begin(), f.begin() + static_cast<long>(t_len));
    m.e.assign(f.begin() + static_cast<long>(t_len), f.end());
    if (require_all_slots_positive && !m.all_slots_positive(ctx.r, ctx.n))
      continue;
    if (slot_cap >= 0 && m.exceeds_slot_cap(ctx.r, ctx.n, slot_cap)) continue;
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

VarNamer default_namer(const PdCtx& ctx) {
  int n = ctx.n;
  return [n](int slot, int var) {
    if (slot < 0) return n == 1 ? std::string("t") : "t" + std::to_string(var + 1);
    std::string s = "z" + std::to_string(slot + 1);
    if (n > 1) s += "_" + std::to_string(var + 1);
    return s;
  };
}

std::string mono_str(const PdCtx& ctx, const PdMono& m, const VarNamer& namer) {
  std::string out;
  auto append = [&out](const std::string& piece) {
    if (!out.empty()) out += "*";
    out += piece;
  };
  for (size_t v = 0; v < m.t.size(); ++v) {
    if (m.t[v] == 0) continue;
    std::string s = namer(-1, static_cast<int>(v));
    if (m.t[v] > 1) s += "^" + std::to_string(m.t[v]);
    append(s);
  }
  for (int slot = 0; slot < ctx.r; ++slot)
    for (int v = 0; v < ctx.n; ++v) {
      int e = m.e[static_cast<size_t>(slot * ctx.n + v)];
      if (e == 0) continue;
      std::string s = namer(slot, v);
      if (e > 1) s += "^(" + std::to_string(e) + ")";
      append(s);
    }
  return out.empty() ? "1" : out;
}

std::string elt_str(const PdCtx& ctx, const PdElt& x) {
  return elt_str(ctx, x, default_namer(ctx));
}

std::string elt_str(const PdCtx& ctx, const PdElt& x, const VarNamer& namer) {
  if (x.is_zero()) return "0";
  std::string out;
  for (auto& [m, v] : x.c) {
    std::string ms = mono_str(ctx, m, namer);
    std::string cs;
    bool negated = false;
    if (v.is_constant()) {
      mpq_class cv = v.constant_value();
      if (cv == 1) {
        cs = "";
      } else if (cv == -1) {
        cs = "";
        negated = true;
      } else if (cv < 0) {
        cs = mpq_class(-cv).get_str();
        negated = true;
      } else {
        cs = cv.get_str();
      }
    } else {
      cs = "(" + v.str() + ")";
    }
    std::string term;
    if (ms == "1") {
      term = cs.empty() ? "1" : cs;
    } else if (cs.empty()) {
      term = ms;
    } else {
      term = cs + "*" + ms;
    }
    if (out.empty()) {
      out = (negated ? "-" : "") + term;
    } else {
      out += (negated ? " - " : " + ") + term;
    }
  }
  return out;
}

}  // namespace pdcalc
