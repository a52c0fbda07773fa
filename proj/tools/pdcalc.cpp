#include <cstdio>
#include <string>
#include <vector>

#include "pdcalc/cli_run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  pdcalc::CliResult res = pdcalc::run_cli(args);
  std::fputs(res.output.c_str(), res.code == 0 ? stdout : stderr);
  return res.code;
}
