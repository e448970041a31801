#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "tower/cli.hpp"
#include "tower/hahn.hpp"
#include "tower/orders.hpp"

using namespace tower;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = cli_run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

bool file_exists(const std::string& path) {
  std::ifstream f(path);
  return static_cast<bool>(f);
}

}  // namespace

TEST_CASE("tr eval prints tower forms on both sides of zero") {
  CliResult r = run_cli({"tr", "eval", "3/2"});
  CHECK(r.code == 0);
  CHECK(r.out == "E^2(1/2)\n");

  r = run_cli({"tr", "eval", "-3/2"});
  CHECK(r.code == 0);
  CHECK(r.out == "1/E^2(1/2)\n");

  SUBCASE("json form carries the exact index, flag position is free") {
    CliResult before = run_cli({"--emit", "json", "tr", "eval", "3/2"});
    CliResult after = run_cli({"tr", "eval", "3/2", "--emit", "json"});
    CHECK(before.code == 0);
    CHECK(before.out == after.out);
    nlohmann::json j = nlohmann::json::parse(before.out);
    CHECK(j["reciprocal"] == false);
    CHECK(j["level"] == 2);
    CHECK(j["index"] == "1/2");
    CHECK(j["err"] == "0");
  }

  SUBCASE("garbage argument is a usage error") {
    r = run_cli({"tr", "eval", "abc"});
    CHECK(r.code == 2);
    CHECK(!r.err.empty());
  }
}

TEST_CASE("tr slog reports exact superlogarithms for tower coordinates") {
  CliResult r = run_cli({"tr", "slog", "3", "1/4"});
  CHECK(r.code == 0);
  CHECK(r.out == "9/4\n");

  r = run_cli({"tr", "slog", "-2", "1/2"});
  CHECK(r.code == 0);
  CHECK(r.out == "-3/2\n");

  r = run_cli({"tr", "slog", "1", "0"});
  CHECK(r.code == 0);
  CHECK(r.out == "0\n");

  SUBCASE("level zero and out-of-range index are rejected") {
    CHECK(run_cli({"tr", "slog", "0", "1/2"}).code == 2);
    CHECK(run_cli({"tr", "slog", "2", "1"}).code == 2);
  }
}

TEST_CASE("tr check runs the suites and exits by outcome") {
  CliResult r = run_cli({"tr", "check", "--suite", "axioms", "--samples", "60",
                         "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("axioms: pass") == 0);
  CHECK(r.out.find("checks=") != std::string::npos);

  r = run_cli({"tr", "check", "--suite", "derivative"});
  CHECK(r.code == 0);
  CHECK(r.out.find("derivative: pass (points=3)") == 0);

  r = run_cli({"tr", "check", "--suite", "growth", "--seed", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("growth: pass") == 0);

  SUBCASE("unknown suite is a usage error") {
    CHECK(run_cli({"tr", "check", "--suite", "nope"}).code == 2);
  }
}

TEST_CASE("rank build, apply, class and shift answer from a saved artifact") {
  const std::string chi_path = "cli_chi_zeta.json";
  std::remove(chi_path.c_str());

  CliResult r = run_cli(
      {"rank", "build", "--delta", "zeta", "--seed", "5", "--out", chi_path});
  CHECK(r.code == 0);
  CHECK(file_exists(chi_path));
  CHECK(r.out.find("zeta") != std::string::npos);

  CliResult applied =
      run_cli({"rank", "apply", "--chi", chi_path, "--element", "-1@0"});
  CHECK(applied.code == 0);
  std::string image_text = applied.out.substr(0, applied.out.size() - 1);
  HahnElement image =
      parse_hahn(HahnRegionOrder::exponent_order(), image_text);
  CHECK(hahn_leading_coeff(image) < 0);
  CHECK(hahn_vg(image)->q > 0);

  SUBCASE("repeat invocations are byte-identical") {
    CliResult again =
        run_cli({"rank", "apply", "--chi", chi_path, "--element", "-1@0"});
    CHECK(again.out == applied.out);
    CHECK(again.code == applied.code);
  }

  SUBCASE("shift agrees with the valuation of the applied indicator") {
    r = run_cli({"rank", "shift", "--chi", chi_path, "--element", "-1@0"});
    CHECK(r.code == 0);
    CHECK(r.out == "shift(0) = " + rat_to_string(hahn_vg(image)->q) + "\n");
  }

  SUBCASE("class prints the rank label") {
    r = run_cli({"rank", "class", "--chi", chi_path, "--element",
                 "-2@1/3 + 1@5"});
    CHECK(r.code == 0);
    CHECK(!r.out.empty());
    CliResult again = run_cli({"rank", "class", "--chi", chi_path,
                               "--element", "-2@1/3 + 1@5"});
    CHECK(again.out == r.out);
  }

  SUBCASE("positive and zero elements are rejected as usage errors") {
    CHECK(run_cli({"rank", "apply", "--chi", chi_path, "--element", "1@0"})
              .code == 2);
    CHECK(run_cli({"rank", "shift", "--chi", chi_path, "--element", "0"})
              .code == 2);
  }

  SUBCASE("missing artifact is a usage error") {
    CHECK(run_cli({"rank", "apply", "--chi", "no_such_file.json", "--element",
                   "-1@0"})
              .code == 2);
  }
}

TEST_CASE("rank check passes on a healthy artifact") {
  const std::string chi_path = "cli_chi_check.json";
  REQUIRE(run_cli({"rank", "build", "--delta", "eta", "--seed", "2", "--out",
                   chi_path})
              .code == 0);

  CliResult r = run_cli({"rank", "check", "--chi", chi_path, "--samples", "40",
                         "--seed", "2", "--budget", "32"});
  CHECK(r.code == 0);
  CHECK(r.out.find("contraction: pass") != std::string::npos);
  CHECK(r.out.find("equiv: pass") != std::string::npos);

  r = run_cli({"--emit", "json", "rank", "check", "--chi", chi_path,
               "--samples", "40", "--seed", "2", "--budget", "32"});
  CHECK(r.code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["contraction"]["violations"].empty());
  CHECK(j["equiv"]["violations"].empty());
}

TEST_CASE("exists answers yes exactly over dense ranks without endpoints") {
  CliResult r = run_cli({"exists", "--delta", "eta"});
  CHECK(r.code == 0);
  CHECK(r.out == "yes\n");

  r = run_cli({"exists", "--delta", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "no: not dense\n");

  r = run_cli({"exists", "--delta", "eta+1"});
  CHECK(r.code == 0);
  CHECK(r.out == "no: has a greatest element\n");

  r = run_cli({"exists", "--delta", "eta + eta"});
  CHECK(r.code == 0);
  CHECK(r.out == "yes\n");

  r = run_cli({"--emit", "json", "exists", "--delta", "omega"});
  CHECK(r.code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["yes"] == false);
  CHECK(j["reason"] == "not dense");
}

TEST_CASE("synth builds a map artifact and answers term queries from it") {
  const std::string chi_path = "cli_chi_eta.json";
  const std::string phi_path = "cli_phi_growth.json";
  REQUIRE(run_cli({"rank", "build", "--delta", "eta", "--seed", "7", "--out",
                   chi_path})
              .code == 0);

  CliResult r = run_cli({"synth", "phi", "--chi", chi_path, "--mode", "growth",
                         "--seed", "9", "--out", phi_path});
  CHECK(r.code == 0);
  CHECK(file_exists(phi_path));

  SUBCASE("tl splits the offset into steps and a fractional part") {
    r = run_cli({"synth", "tl", "--phi", phi_path, "--a", "1@0", "--b", "7/2"});
    CHECK(r.code == 0);
    CHECK(r.out == "1@0;3;1/2\n");

    r = run_cli(
        {"synth", "tl", "--phi", phi_path, "--a", "1@0", "--b", "-3/2"});
    CHECK(r.code == 0);
    CHECK(r.out == "1@0;-2;1/2\n");
  }

  SUBCASE("compare orders terms by index, then steps, then offset") {
    r = run_cli({"synth", "compare", "--phi", phi_path, "1@0;3;1/2",
                 "1@0;3;0"});
    CHECK(r.code == 0);
    CHECK(r.out == "GT\n");

    r = run_cli({"synth", "compare", "--phi", phi_path, "1@0;5;0",
                 "1@-1;0;0"});
    CHECK(r.code == 0);
    CHECK(r.out == "LT\n");

    r = run_cli({"synth", "compare", "--phi", phi_path, "2@1;1;1/4",
                 "2@1;1;1/4"});
    CHECK(r.code == 0);
    CHECK(r.out == "EQ\n");
  }

  SUBCASE("xt names a class strictly above the element's own in growth mode") {
    r = run_cli({"--emit", "json", "synth", "xt", "--phi", phi_path, "--g",
                 "-1@0"});
    CHECK(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["class"] != j["xt"]);

    CliResult text = run_cli({"synth", "xt", "--phi", phi_path, "--g", "-1@0"});
    CHECK(text.code == 0);
    CHECK(text.out == j["xt"].get<std::string>() + "\n");
    CliResult again =
        run_cli({"synth", "xt", "--phi", phi_path, "--g", "-1@0"});
    CHECK(again.out == text.out);
  }

  SUBCASE("synthesis over a non-dense rank exits 4 and writes nothing") {
    const std::string chi3 = "cli_chi_three.json";
    const std::string phi3 = "cli_phi_three.json";
    std::remove(phi3.c_str());
    REQUIRE(run_cli({"rank", "build", "--delta", "3", "--seed", "1", "--out",
                     chi3})
                .code == 0);
    r = run_cli({"synth", "phi", "--chi", chi3, "--mode", "growth", "--out",
                 phi3});
    CHECK(r.code == 4);
    CHECK(r.err.find("unsupported construction") != std::string::npos);
    CHECK(!file_exists(phi3));
  }
}

TEST_CASE("synth check passes per mode and surfaces the pinned witness") {
  const std::string chi_path = "cli_chi_modes.json";
  REQUIRE(run_cli({"rank", "build", "--delta", "eta", "--seed", "11", "--out",
                   chi_path})
              .code == 0);

  const std::string phi_g = "cli_phi_check_growth.json";
  REQUIRE(run_cli({"synth", "phi", "--chi", chi_path, "--mode", "growth",
                   "--seed", "4", "--out", phi_g})
              .code == 0);
  CliResult r = run_cli(
      {"synth", "check", "--phi", phi_g, "--samples", "30", "--seed", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("synthesis[growth]: pass") != std::string::npos);
  CHECK(r.out.find("encoding[growth]: pass") != std::string::npos);

  const std::string phi_n = "cli_phi_check_nogrowth.json";
  REQUIRE(run_cli({"synth", "phi", "--chi", chi_path, "--mode", "nogrowth",
                   "--seed", "4", "--out", phi_n})
              .code == 0);
  r = run_cli(
      {"synth", "check", "--phi", phi_n, "--samples", "30", "--seed", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("encoding[nogrowth]: pass") != std::string::npos);
  CHECK(r.out.find("witness: g=-1@0") != std::string::npos);
}

TEST_CASE("usage problems exit 2 and help exits 0") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"bogus"}).code == 2);
  CHECK(run_cli({"tr", "eval", "1/2", "--bogus"}).code == 2);
  CHECK(run_cli({"rank", "build", "--delta", "zeta"}).code == 2);

  CliResult help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("Usage") != std::string::npos);
}
