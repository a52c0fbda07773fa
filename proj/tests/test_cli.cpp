#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdcalc/cli_run.hpp"

using nlohmann::json;
using pdcalc::CliResult;
using pdcalc::run_cli;

namespace {

CliResult run(std::vector<std::string> args) { return run_cli(args); }

bool has(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

json parse_json(const CliResult& res) {
  REQUIRE(res.code == 0);
  return json::parse(res.output);
}

}  // namespace

TEST_CASE("help and argument validation") {
  CliResult help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(has(help.output, "invariant-forms"));
  CHECK(has(help.output, "poincare"));
  CHECK(has(help.output, "scan"));

  CHECK(run({}).code == 2);                           // subcommand required
  CHECK(run({"invariant-forms"}).code == 2);          // --group/--p required
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"scan", "--p", "3", "--format", "yaml"}).code == 2);
  CHECK(run({"invariant-forms", "--group", "ga", "--p", "3", "--csv"}).code ==
        2);  // csv not offered here
}

TEST_CASE("invariant-forms: additive law over F_3") {
  json j = parse_json(run({"invariant-forms", "--group", "ga", "--p", "3",
                           "--D", "6", "--json"}));
  CHECK(j["group"] == "additive");
  CHECK(j["ring"] == "F_3");
  CHECK(j["D"] == 6);
  CHECK(j["generators"] == json::array({"t", "t^(3)"}));
  CHECK(j["invariant_factors"] == json::array({"1", "1"}));
  REQUIRE(j["fil"].size() == 4);  // k = 0..3
  CHECK(j["fil"][0]["rank"] == 2);
  CHECK(j["fil"][1]["rank"] == 2);
  CHECK(j["fil"][2]["rank"] == 1);
  CHECK(j["fil"][3]["rank"] == 1);
  CHECK(j["fil"][3]["generators"] == json::array({"t^(3)"}));
}

TEST_CASE("invariant-forms: multiplicative law over Z/4") {
  CliResult res = run({"invariant-forms", "--group", "gm", "--p", "2", "--m",
                       "1", "--ring", "zmod:4", "--D", "6", "--json"});
  json j = parse_json(res);
  CHECK(j["ring"] == "Z/4");
  CHECK(j["generators"] == json::array({"2*s + s^(2)", "2*s^(2)"}));
  // (2,1) alone generates: 2*(2s + s^(2)) = 2s^(2), so the module is cyclic.
  CHECK(j["invariant_factors"] == json::array({"1"}));
  REQUIRE(j["fil"].size() == 3);  // k = 0..2
  CHECK(j["fil"][1]["rank"] == 2);
  CHECK(j["fil"][2]["rank"] == 1);
  CHECK(j["fil"][2]["generators"] == json::array({"2*s^(2)"}));
  CHECK(j["fil"][2]["invariant_factors"] == json::array({"2"}));

  CliResult text = run({"invariant-forms", "--group", "gm", "--p", "2", "--m",
                        "1", "--ring", "zmod:4", "--D", "6"});
  CHECK(text.code == 0);
  CHECK(has(text.output, "Fil^2"));
  CHECK(has(text.output, "invariant factors"));
  CHECK(has(text.output, "2*s^(2)"));
}

TEST_CASE("invariant-forms: legendre family needs a symbolic ring") {
  json j = parse_json(run({"invariant-forms", "--group", "legendre", "--p",
                           "3", "--ring", "fp-rational:lam", "--D", "6",
                           "--json"}));
  CHECK(j["ring"] == "F_3(lam)");
  CHECK(j["generators"] == json::array({"z^(3)"}));

  CliResult bad = run({"invariant-forms", "--group", "legendre", "--p", "3",
                       "--D", "6"});
  CHECK(bad.code == 2);
  CHECK(has(bad.output, "configuration error"));
  CHECK(has(bad.output, "symbolic"));
}

TEST_CASE("scan: csv over F_3 flags the one special fiber") {
  CliResult res = run({"scan", "--p", "3", "--D", "6", "--csv"});
  CHECK(res.code == 0);
  CHECK(res.output ==
        "lambda,rank,supersingular,generators\n"
        "2,2,true,z;z^(3)\n");
}

TEST_CASE("scan: json over F_9") {
  json j = parse_json(
      run({"scan", "--p", "3", "--ext", "2", "--D", "6", "--json"}));
  CHECK(j["generic_rank"] == 1);
  REQUIRE(j["scan"].size() == 7);  // nine field elements minus the two poles
  int flagged = 0;
  for (const auto& pt : j["scan"]) {
    if (pt["supersingular"].get<bool>()) {
      ++flagged;
      CHECK(pt["lambda"] == "2");
      CHECK(pt["rank"] == 2);
      CHECK(pt["generators"] == json::array({"z", "z^(3)"}));
    } else {
      CHECK(pt["rank"] == 1);
      CHECK(pt["generators"] == json::array({"z^(3)"}));
    }
  }
  CHECK(flagged == 1);
}

TEST_CASE("scan: level zero has no rank jumps") {
  json j = parse_json(run({"scan", "--p", "3", "--m", "0", "--D", "4",
                           "--json"}));
  CHECK(j["generic_rank"] == 1);
  REQUIRE(j["scan"].size() == 1);
  CHECK(j["scan"][0]["rank"] == 1);
  CHECK(j["scan"][0]["supersingular"] == false);
}

TEST_CASE("scan: rejected configurations") {
  CliResult p2 = run({"scan", "--p", "2", "--D", "6"});
  CHECK(p2.code == 2);
  CHECK(has(p2.output, "configuration error"));
}

TEST_CASE("group-law: legendre coefficient table") {
  json j = parse_json(run({"group-law", "--group", "legendre", "--prec", "6",
                           "--json"}));
  CHECK(j["group"] == "legendre");
  CHECK(j["coordinate"] == "z");
  CHECK(j["params"] == json::array({"lam"}));
  bool found = false;
  for (const auto& c : j["coefficients"]) {
    if (c["i"] == 1 && c["j"] == 2) {
      found = true;
      CHECK(c["value"] == "1 + lam");
    }
  }
  CHECK(found);
  CHECK(j["verified"]["unit"] == true);
  CHECK(j["verified"]["commutative"] == true);
  CHECK(j["verified"]["associative"] == true);
  CHECK(j["verified"]["inverse"] == true);
  CHECK(j["odd_symmetry"] == true);
}

TEST_CASE("group-law: multiplicative and generic weierstrass") {
  json gm = parse_json(run({"group-law", "--group", "gm", "--prec", "8",
                            "--json"}));
  REQUIRE(gm["coefficients"].size() == 3);
  for (const auto& c : gm["coefficients"]) CHECK(c["value"] == "1");
  CHECK(gm["verified"]["associative"] == true);
  CHECK(gm["odd_symmetry"] == false);

  json w = parse_json(run({"group-law", "--group", "weierstrass", "--prec",
                           "5", "--json"}));
  CHECK(w["params"].size() == 5);
  CHECK(w["verified"]["associative"] == true);
  CHECK(w["verified"]["inverse"] == true);
}

TEST_CASE("delta-table: additive law over Z/27") {
  CliResult res = run({"delta-table", "--group", "ga", "--p", "3", "--m", "1",
                       "--ring", "zmod:27", "--D", "6"});
  CHECK(res.code == 0);
  CHECK(has(res.output, "delta(t) = 0"));
  CHECK(has(res.output, "delta(t^(2)) = 25*t1*t2"));
  CHECK(has(res.output, "delta(t^(3)) = 24*t1^(2)*t2 + 24*t1*t2^(2)"));
}

TEST_CASE("delta-table: legendre family with exact coefficients") {
  json j = parse_json(run({"delta-table", "--group", "legendre", "--p", "3",
                           "--D", "6", "--json"}));
  CHECK(j["ring"] == "exact");
  REQUIRE(j["table"].size() == 3);
  std::string d1 = j["table"][0].get<std::string>();
  CHECK(has(d1, "delta(z) ="));
  CHECK(has(d1, "(-1 - lam)*z1^(2)*z2"));
  CHECK(has(d1, "(-1 - lam)*z1*z2^(2)"));
  CHECK(has(d1, "lam^2"));
  std::string d3 = j["table"][2].get<std::string>();
  CHECK(has(d3, "delta(z^(3)) ="));
  CHECK(has(d3, "(-3)*z1^(2)*z2"));
}

TEST_CASE("poincare: linearized complex is exact, coordinate control is not") {
  json ok = parse_json(run({"poincare", "--p", "3", "--m", "1", "--ring",
                            "zmod:9", "--D", "6", "--json"}));
  CHECK(ok["linearized"] == true);
  CHECK(ok["band"] == 0);
  CHECK(ok["all_exact"] == true);
  REQUIRE(ok["checks"].size() == 2);
  for (const auto& c : ok["checks"]) {
    CHECK(c["exact"] == true);
    CHECK(c["homology_length"] == 0);
  }

  json bad = parse_json(run({"poincare", "--p", "3", "--m", "0", "--n", "2",
                             "--D", "4", "--control", "--json"}));
  CHECK(bad["linearized"] == false);
  CHECK(bad["all_exact"] == false);
  bool inexact_with_witness = false;
  for (const auto& c : bad["checks"]) {
    if (!c["exact"].get<bool>() && c["homology_length"].get<int>() > 0 &&
        !c["witness"].get<std::string>().empty())
      inexact_with_witness = true;
  }
  CHECK(inexact_with_witness);
}

TEST_CASE("ring specifications are validated") {
  CliResult bad = run({"invariant-forms", "--group", "ga", "--p", "3",
                       "--ring", "foo", "--D", "6"});
  CHECK(bad.code == 2);
  CHECK(has(bad.output, "unknown ring"));

  CliResult mixed = run({"invariant-forms", "--group", "ga", "--p", "3",
                         "--ring", "zmod:6", "--D", "6"});
  CHECK(mixed.code == 2);
  CHECK(has(mixed.output, "not a positive power"));

  CliResult small = run({"poincare", "--p", "3", "--m", "1", "--D", "5"});
  CHECK(small.code == 2);
  CHECK(has(small.output, "configuration error"));
}

TEST_CASE("degree cap from the environment") {
  setenv("PDCALC_MAX_DEGREE", "6", 1);
  CliResult capped = run({"scan", "--p", "3"});  // default degree exceeds 6
  CHECK(capped.code == 2);
  CHECK(has(capped.output, "PDCALC_MAX_DEGREE"));
  CliResult fits = run({"scan", "--p", "3", "--D", "6", "--csv"});
  CHECK(fits.code == 0);
  unsetenv("PDCALC_MAX_DEGREE");
}

TEST_CASE("json output is deterministic") {
  std::vector<std::string> args = {"scan", "--p",  "3",     "--ext",
                                   "2",    "--D",  "6",     "--json"};
  CliResult a = run(args);
  CliResult b = run(args);
  CHECK(a.code == 0);
  CHECK(a.output == b.output);

  std::vector<std::string> args2 = {"invariant-forms", "--group", "gm",
                                    "--p", "2", "--ring", "zmod:4",
                                    "--D", "6", "--json"};
  CHECK(run(args2).output == run(args2).output);
}
