#include "pdcalc/cli_run.hpp"

#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdcalc/invariant_forms.hpp"
#include "pdcalc/poincare.hpp"

namespace pdcalc {

namespace {

using nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

long parse_long(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " '" + s + "'");
  }
}

Ring parse_ring(const std::string& spec, long p) {
  auto tail = [&](const std::string& prefix) {
    return spec.substr(prefix.size());
  };
  if (spec == "fp") return ring_fp(p);
  if (spec.rfind("zmod:", 0) == 0) {
    long modulus = parse_long(tail("zmod:"), "zmod modulus");
    long t = modulus;
    int e = 0;
    while (t > 1 && t % p == 0) {
      t /= p;
      ++e;
    }
    if (t != 1 || e < 1)
      throw ConfigError("zmod modulus " + std::to_string(modulus) +
                        " is not a positive power of p = " + std::to_string(p));
    return ring_zmod(p, e);
  }
  if (spec.rfind("gf:", 0) == 0) {
    long e = parse_long(tail("gf:"), "field extension degree");
    return ring_gf(p, static_cast<int>(e));
  }
  if (spec.rfind("fp-poly:", 0) == 0) {
    std::string name = tail("fp-poly:");
    if (name.empty()) throw ConfigError("fp-poly needs a variable name");
    return ring_poly(p, name);
  }
  if (spec.rfind("fp-rational:", 0) == 0) {
    std::string name = tail("fp-rational:");
    if (name.empty()) throw ConfigError("fp-rational needs a variable name");
    return ring_ratfun(p, name);
  }
  throw ConfigError(
      "unknown ring '" + spec +
      "' (expected fp, zmod:<p^N>, gf:<e>, fp-poly:<x>, fp-rational:<x>)");
}

GroupLaw parse_group(const std::string& g, int trunc) {
  if (g == "ga" || g == "additive") return make_additive(trunc);
  if (g == "gm" || g == "multiplicative") return make_multiplicative(trunc);
  if (g == "legendre") return make_legendre(trunc);
  if (g == "weierstrass") return make_weierstrass(trunc);
  throw ConfigError("unknown group '" + g +
                    "' (expected ga, gm, legendre, weierstrass)");
}

// Keep the law parameters symbolic inside R when R can carry them.
std::map<std::string, RElem> law_bind(const Ring& R, const GroupLaw& law) {
  std::map<std::string, RElem> bind;
  if (law.params.empty()) return bind;
  if (R.kind == RingKind::PolyOverPrimeField) {
    for (const std::string& name : law.params)
      bind.emplace(name, RElem(FpPoly::var(R.p)));
    return bind;
  }
  if (R.kind == RingKind::RationalFunctions) {
    for (const std::string& name : law.params)
      bind.emplace(name, RElem(rat_make(FpPoly::var(R.p),
                                        FpPoly::constant(R.p, 1))));
    return bind;
  }
  throw ConfigError("ring '" + R.describe() +
                    "' cannot keep the law parameters symbolic; use "
                    "fp-poly:<x> or fp-rational:<x>");
}

int auto_trunc(const PrimeLevel& pl, int requested) {
  int D = requested > 0 ? requested : 3 * static_cast<int>(pl.pm);
  if (const char* cap = std::getenv("PDCALC_MAX_DEGREE")) {
    long limit = parse_long(cap, "PDCALC_MAX_DEGREE");
    if (D > limit)
      throw ConfigError("truncation " + std::to_string(D) +
                        " exceeds PDCALC_MAX_DEGREE=" + std::string(cap));
  }
  return D;
}

std::string render(const ordered_json& j, const std::string& format,
                   const std::string& text) {
  if (format == "json") return j.dump(2) + "\n";
  return text;
}

// ---------------------------------------------------------------------------
// invariant-forms
// ---------------------------------------------------------------------------

std::string cmd_invariant_forms(const std::string& group, long p, int m,
                                const std::string& ring_spec, int D_opt,
                                const std::string& format) {
  PrimeLevel pl = make_prime_level(p, m);
  int D = auto_trunc(pl, D_opt);
  GroupLaw law = parse_group(group, D);
  Ring R = parse_ring(ring_spec, p);
  std::map<std::string, RElem> bind = law_bind(R, law);
  DeltaData dd = build_delta(law, pl, D);

  Mat ker = closed_form_rows(R, dd, bind);
  std::vector<std::string> gens = render_form_rows(R, dd, ker);
  std::vector<mpz_class> inv = span_invariant_factors(R, ker);

  ordered_json j;
  j["group"] = group_law_kind_name(law.kind);
  j["p"] = p;
  j["m"] = m;
  j["ring"] = R.describe();
  j["D"] = D;
  j["generators"] = gens;
  ordered_json fil = ordered_json::array();
  std::ostringstream text;
  text << "closed invariant forms: " << group_law_kind_name(law.kind)
       << ", p=" << p << ", m=" << m << ", ring " << R.describe() << ", D="
       << D << "\n";
  text << "generators:";
  for (const std::string& g : gens) text << "  " << g;
  if (gens.empty()) text << "  (none)";
  text << "\n";
  for (int k = 0; k <= static_cast<int>(pl.pm); ++k) {
    Mat piece = fil_piece_rows(R, dd, k, bind);
    std::vector<std::string> pg = render_form_rows(R, dd, piece);
    std::vector<mpz_class> pf = span_invariant_factors(R, piece);
    ordered_json entry;
    entry["k"] = k;
    entry["rank"] = piece.rows;
    entry["invariant_factors"] = ordered_json::array();
    for (const mpz_class& f : pf)
      entry["invariant_factors"].push_back(f.get_str());
    entry["generators"] = pg;
    fil.push_back(entry);
    text << "Fil^" << k << ": " << piece.rows << " generator(s)";
    if (R.kind == RingKind::IntegersModPrimePower && !pf.empty()) {
      text << ", invariant factors";
      for (const mpz_class& f : pf) text << " " << f.get_str();
    }
    for (const std::string& g : pg) text << "  " << g;
    text << "\n";
  }
  j["fil"] = fil;
  j["invariant_factors"] = ordered_json::array();
  for (const mpz_class& f : inv) j["invariant_factors"].push_back(f.get_str());
  return render(j, format, text.str());
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

std::string cmd_scan(long p, int m, int ext, int D_opt,
                     const std::string& format) {
  PrimeLevel pl = make_prime_level(p, m);
  int D = auto_trunc(pl, D_opt);
  GroupLaw law = make_legendre(D);
  DeltaData dd = build_delta(law, pl, D);
  ScanResult res = rank_scan(dd, ext);

  if (format == "csv") {
    std::ostringstream csv;
    csv << "lambda,rank,supersingular,generators\n";
    for (const ScanPoint& pt : res.points) {
      csv << pt.lambda << "," << pt.rank << ","
          << (pt.supersingular ? "true" : "false") << ",";
      for (size_t i = 0; i < pt.generators.size(); ++i) {
        if (i) csv << ";";
        csv << pt.generators[i];
      }
      csv << "\n";
    }
    return csv.str();
  }

  ordered_json j;
  j["group"] = group_law_kind_name(law.kind);
  j["p"] = p;
  j["m"] = m;
  j["ext"] = ext;
  j["D"] = D;
  j["generic_rank"] = res.generic_rank;
  ordered_json scan = ordered_json::array();
  std::ostringstream text;
  text << "fiber scan over F_" << p;
  if (ext > 1) text << "^" << ext;
  text << " (generic rank " << res.generic_rank << ")\n";
  for (const ScanPoint& pt : res.points) {
    ordered_json entry;
    entry["lambda"] = pt.lambda;
    entry["rank"] = pt.rank;
    entry["naive_rank"] = pt.naive_rank;
    entry["supersingular"] = pt.supersingular;
    entry["generators"] = pt.generators;
    scan.push_back(entry);
    text << "lambda = " << pt.lambda << ": rank " << pt.rank
         << (pt.supersingular ? "  [supersingular]" : "");
    for (const std::string& g : pt.generators) text << "  " << g;
    text << "\n";
  }
  j["scan"] = scan;
  return render(j, format, text.str());
}

// ---------------------------------------------------------------------------
// group-law
// ---------------------------------------------------------------------------

std::string cmd_group_law(const std::string& kind, int prec,
                          const std::string& format) {
  GroupLaw law = parse_group(kind, prec);
  ordered_json j;
  j["group"] = group_law_kind_name(law.kind);
  j["coordinate"] = law.coordinate;
  j["prec"] = prec;
  j["params"] = law.params;
  ordered_json coeffs = ordered_json::array();
  std::ostringstream text;
  text << "group law " << group_law_kind_name(law.kind) << " through degree "
       << prec << "\n";
  for (const auto& [e, v] : law.F.c) {
    ordered_json entry;
    entry["i"] = e[0];
    entry["j"] = e[1];
    entry["value"] = v.str();
    coeffs.push_back(entry);
    text << "F[" << e[0] << "," << e[1] << "] = " << v.str() << "\n";
  }
  j["coefficients"] = coeffs;
  ordered_json ax;
  ax["unit"] = check_unit(law);
  ax["commutative"] = check_commutative(law);
  ax["associative"] = check_associative(law, prec);
  ax["inverse"] = check_inverse(law);
  j["verified"] = ax;
  bool odd = check_odd(law);
  j["odd_symmetry"] = odd;
  text << "axioms: unit " << (ax["unit"].get<bool>() ? "ok" : "FAIL")
       << ", commutative " << (ax["commutative"].get<bool>() ? "ok" : "FAIL")
       << ", associative " << (ax["associative"].get<bool>() ? "ok" : "FAIL")
       << ", inverse " << (ax["inverse"].get<bool>() ? "ok" : "FAIL")
       << "; odd symmetry: " << (odd ? "yes" : "no") << "\n";
  return render(j, format, text.str());
}

// ---------------------------------------------------------------------------
// delta-table
// ---------------------------------------------------------------------------

std::string cmd_delta_table(const std::string& group, long p, int m,
                            const std::string& ring_spec, int D_opt,
                            const std::string& format) {
  PrimeLevel pl = make_prime_level(p, m);
  int D = auto_trunc(pl, D_opt);
  GroupLaw law = parse_group(group, D);
  DeltaData dd = build_delta(law, pl, D);

  std::vector<std::string> lines;
  std::string ring_name;
  if (ring_spec.empty()) {
    // Exact integer (or polynomial) coefficients, no reduction.
    ring_name = "exact";
    VarNamer namer1 = [&](int, int) { return law.coordinate; };
    for (long jcol = 0; jcol < dd.delta.cols; ++jcol) {
      std::ostringstream os;
      os << "delta("
         << mono_str(dd.w1.ctx, dd.w1.basis[static_cast<size_t>(jcol)], namer1)
         << ") =";
      bool first = true;
      for (long i = 0; i < dd.delta.rows; ++i) {
        const Universal& u = dd.delta.at(i, jcol);
        if (u.is_zero()) continue;
        VarNamer namer2 = [&](int slot, int) {
          return law.coordinate + std::to_string(slot + 1);
        };
        os << (first ? " " : " + ") << "(" << u.str() << ")*"
           << mono_str(dd.w2.ctx, dd.w2.basis[static_cast<size_t>(i)], namer2);
        first = false;
      }
      if (first) os << " 0";
      lines.push_back(os.str());
    }
  } else {
    Ring R = parse_ring(ring_spec, p);
    ring_name = R.describe();
    lines = delta_table(R, dd, law_bind(R, law));
  }

  ordered_json j;
  j["group"] = group_law_kind_name(law.kind);
  j["p"] = p;
  j["m"] = m;
  j["ring"] = ring_name;
  j["D"] = D;
  j["table"] = lines;
  std::ostringstream text;
  for (const std::string& line : lines) text << line << "\n";
  return render(j, format, text.str());
}

// ---------------------------------------------------------------------------
// poincare
// ---------------------------------------------------------------------------

std::string cmd_poincare(long p, int m, int n, const std::string& ring_spec,
                         int D_opt, bool control, const std::string& format) {
  PrimeLevel pl = make_prime_level(p, m);
  int D = auto_trunc(pl, D_opt);
  Ring R = parse_ring(ring_spec, p);
  PoincareComplex c =
      control ? build_derham(pl, n, D) : build_linearized(pl, n, D);
  ExactnessReport rep = check_band(R, c);

  ordered_json j;
  j["p"] = p;
  j["m"] = m;
  j["n"] = n;
  j["ring"] = R.describe();
  j["D"] = D;
  j["linearized"] = c.linearized;
  j["band"] = rep.band;
  j["all_exact"] = rep.all_exact;
  ordered_json checks = ordered_json::array();
  std::ostringstream text;
  text << (c.linearized ? "linearized" : "coordinate") << " complex, p=" << p
       << ", m=" << m << ", n=" << n << ", ring " << R.describe()
       << ", D=" << D << ", band 0.." << rep.band << "\n";
  for (const ExactnessCheck& chk : rep.checks) {
    ordered_json entry;
    entry["k"] = chk.k;
    entry["position"] = chk.position;
    entry["exact"] = chk.exact;
    entry["kernel_length"] = chk.kernel_length;
    entry["image_length"] = chk.image_length;
    entry["homology_length"] = chk.homology_length;
    if (!chk.exact) entry["witness"] = chk.witness;
    checks.push_back(entry);
    text << "k=" << chk.k << " position " << chk.position << ": "
         << (chk.exact ? "exact" : "homology of length " +
                                       std::to_string(chk.homology_length) +
                                       ", witness " + chk.witness)
         << "\n";
  }
  j["checks"] = checks;
  text << (rep.all_exact ? "all band checks exact" : "NOT exact everywhere")
       << "\n";
  return render(j, format, text.str());
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CLI::App app{"exact divided-power calculus for formal groups"};
  app.require_subcommand(1);

  std::string format = "text";
  auto add_format = [&format](CLI::App* sub, bool csv_allowed) {
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember(csv_allowed
                                  ? std::vector<std::string>{"text", "json",
                                                             "csv"}
                                  : std::vector<std::string>{"text", "json"}))
        ->default_val("text");
    sub->add_flag_callback("--json", [&format] { format = "json"; },
                           "shorthand for --format json");
    if (csv_allowed)
      sub->add_flag_callback("--csv", [&format] { format = "csv"; },
                             "shorthand for --format csv");
  };

  // invariant-forms
  std::string if_group, if_ring = "fp";
  long if_p = 0;
  int if_m = 1, if_D = 0;
  CLI::App* ifc = app.add_subcommand(
      "invariant-forms", "closed invariant one-forms of a formal group");
  ifc->add_option("--group", if_group)->required();
  ifc->add_option("--p", if_p)->required();
  ifc->add_option("--m", if_m)->default_val(1);
  ifc->add_option("--ring", if_ring)->default_val("fp");
  ifc->add_option("--D", if_D);
  add_format(ifc, false);

  // scan
  long sc_p = 0;
  int sc_m = 1, sc_ext = 1, sc_D = 0;
  CLI::App* sc = app.add_subcommand(
      "scan", "kernel ranks across the fibers of the curve family");
  sc->add_option("--p", sc_p)->required();
  sc->add_option("--m", sc_m)->default_val(1);
  sc->add_option("--ext", sc_ext)->default_val(1);
  sc->add_option("--D", sc_D);
  add_format(sc, true);

  // group-law
  std::string gl_kind;
  int gl_prec = 6;
  long gl_p = 0;  // accepted for symmetry; the law itself is exact
  CLI::App* gl = app.add_subcommand("group-law",
                                    "formal group law coefficient table");
  gl->add_option("--group", gl_kind)->required();
  gl->add_option("--prec", gl_prec)->default_val(6);
  gl->add_option("--p", gl_p);
  add_format(gl, false);

  // delta-table
  std::string dt_group, dt_ring;
  long dt_p = 0;
  int dt_m = 1, dt_D = 0;
  CLI::App* dt = app.add_subcommand(
      "delta-table", "differential of each degree-one generator");
  dt->add_option("--group", dt_group)->required();
  dt->add_option("--p", dt_p)->required();
  dt->add_option("--m", dt_m)->default_val(1);
  dt->add_option("--ring", dt_ring);
  dt->add_option("--D", dt_D);
  add_format(dt, false);

  // poincare
  long pc_p = 0;
  int pc_m = 1, pc_n = 1, pc_D = 0;
  std::string pc_ring = "fp";
  bool pc_control = false;
  CLI::App* pc = app.add_subcommand(
      "poincare", "filtered exactness of the linearized complex");
  pc->add_option("--p", pc_p)->required();
  pc->add_option("--m", pc_m)->default_val(1);
  pc->add_option("--n", pc_n)->default_val(1);
  pc->add_option("--ring", pc_ring)->default_val("fp");
  pc->add_option("--D", pc_D);
  pc->add_flag("--control", pc_control,
               "run the non-linearized coordinate complex instead");
  add_format(pc, true);

  CliResult res;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends
      res.output = app.help();
      res.code = 0;
      return res;
    }
    res.code = 2;
    res.output = std::string(e.what()) + "\n";
    return res;
  }

  try {
    if (ifc->parsed())
      res.output =
          cmd_invariant_forms(if_group, if_p, if_m, if_ring, if_D, format);
    else if (sc->parsed())
      res.output = cmd_scan(sc_p, sc_m, sc_ext, sc_D, format);
    else if (gl->parsed())
      res.output = cmd_group_law(gl_kind, gl_prec, format);
    else if (dt->parsed())
      res.output = cmd_delta_table(dt_group, dt_p, dt_m, dt_ring, dt_D, format);
    else if (pc->parsed())
      res.output =
          cmd_poincare(pc_p, pc_m, pc_n, pc_ring, pc_D, pc_control, format);
  } catch (const ConfigError& e) {
    res.code = 2;
    res.output = std::string("configuration error: ") + e.what() + "\n";
  } catch (const UnsupportedRing& e) {
    res.code = 2;
    res.output = std::string("configuration error: ") + e.what() + "\n";
  } catch (const UnsupportedKind& e) {
    res.code = 2;
    res.output = std::string("configuration error: ") + e.what() + "\n";
  } catch (const TruncationTooSmall& e) {
    res.code = 2;
    res.output = std::string("configuration error: ") + e.what() + "\n";
  } catch (const BandViolation& e) {
    res.code = 2;
    res.output = std::string("configuration error: ") + e.what() + "\n";
  } catch (const CalcError& e) {
    res.code = 1;
    res.output = std::string("internal error: ") + e.what() + "\n";
  }
  return res;
}

}  // namespace pdcalc
