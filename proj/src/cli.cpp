#include "tower/cli.hpp"

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tower/contraction.hpp"
#include "tower/errors.hpp"
#include "tower/hahn.hpp"
#include "tower/levelindex.hpp"
#include "tower/orders.hpp"
#include "tower/ordertype.hpp"
#include "tower/rational.hpp"
#include "tower/transexp.hpp"

namespace tower {
namespace {

nlohmann::json read_artifact(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(path + ": " + e.what());
  }
  return j;
}

void write_artifact(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out.good()) throw DomainError("cannot write " + path);
}

// Group elements on the command line always live over the shared rational
// exponent line; the artifact fixes the rank, not the group.
HahnElement parse_group_element(const std::string& text) {
  return parse_hahn(HahnRegionOrder::exponent_order(), text);
}

struct GlobalOpts {
  std::string emit = "text";
  int precision = 30;
  unsigned budget = 64;
  std::size_t samples = 500;
  std::uint64_t seed = 0;
  bool json() const { return emit == "json"; }
};

void emit_value(std::ostream& out, const GlobalOpts& g, const nlohmann::json& j,
                const std::string& text) {
  if (g.json())
    out << j.dump(2) << "\n";
  else
    out << text << "\n";
}

int print_suite(std::ostream& out, const GlobalOpts& g, const SuiteReport& rep) {
  if (g.json()) {
    out << rep.to_json().dump(2) << "\n";
  } else {
    out << rep.suite << (rep.passed() ? ": pass" : ": FAIL")
        << " (checks=" << rep.checks << ", seed=" << rep.seed << ")\n";
    for (const auto& v : rep.violations) out << "  " << v << "\n";
  }
  return rep.passed() ? 0 : 1;
}

int run_impl(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"workbench for ordered transexponential arithmetic"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--emit", g.emit, "output form")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--precision", g.precision, "working decimal digits")
      ->check(CLI::PositiveNumber);
  app.add_option("--budget", g.budget, "iteration budget for equivalence");
  app.add_option("--samples", g.samples, "sample count for the check suites");
  app.add_option("--seed", g.seed, "seed for anything randomized");

  int rc = 0;

  // tr: the archimedean tower model.
  auto* tr = app.add_subcommand("tr", "tower arithmetic");
  tr->require_subcommand(1);
  tr->fallthrough();

  auto* tr_eval_cmd = tr->add_subcommand("eval", "tower form of T at a rational");
  tr_eval_cmd->fallthrough();
  std::string eval_x;
  tr_eval_cmd->add_option("x", eval_x, "rational argument")->required();
  tr_eval_cmd->callback([&] {
    LevelIndex v = tr_eval(parse_rational(eval_x), g.precision);
    emit_value(out, g, v.to_json(), v.to_text());
  });

  auto* tr_slog = tr->add_subcommand("slog", "super-logarithm of a tower form");
  tr_slog->fallthrough();
  std::string slog_m, slog_r;
  tr_slog->add_option("m", slog_m, "tower level, sign picks the side")
      ->required();
  tr_slog->add_option("r", slog_r, "index in [0, 1)")->required();
  tr_slog->callback([&] {
    Int m = parse_integer(slog_m);
    Rat r = parse_rational(slog_r);
    if (sgn(m) == 0) throw DomainError("tower level must be nonzero");
    if (r < 0 || !(r < 1)) throw DomainError("tower index must lie in [0, 1)");
    Rat x{Rat(Int(abs(m))) + r - 1};
    if (m < 0) x = Rat(-x);
    SlogValue s = slog(tr_eval(x, g.precision));
    nlohmann::json js{{"exact", s.exact}, {"approx", s.approx}};
    if (s.exact) js["value"] = rat_to_string(s.value);
    emit_value(out, g, js, s.to_text());
  });

  auto* tr_check = tr->add_subcommand("check", "run one property suite");
  tr_check->fallthrough();
  std::string suite;
  tr_check->add_option("--suite", suite, "axioms, growth or derivative")
      ->required()
      ->check(CLI::IsMember({"axioms", "growth", "derivative"}));
  tr_check->callback([&] {
    if (suite == "axioms") {
      rc = print_suite(out, g, check_axioms(g.samples, g.seed));
    } else if (suite == "growth") {
      rc = print_suite(out, g, check_growth(5, 20, g.seed));
    } else {
      DerivativeReport rep = check_derivative();
      if (g.json()) {
        out << rep.to_json().dump(2) << "\n";
      } else {
        out << "derivative" << (rep.passed() ? ": pass" : ": FAIL")
            << " (points=" << rep.points.size() << ")\n";
        for (const auto& v : rep.violations) out << "  " << v << "\n";
      }
      rc = rep.passed() ? 0 : 1;
    }
  });

  // rank: contraction structures over a prescribed rank.
  auto* rank = app.add_subcommand("rank", "contraction structures");
  rank->require_subcommand(1);
  rank->fallthrough();

  auto* rank_build = rank->add_subcommand("build", "build and save a structure");
  rank_build->fallthrough();
  std::string build_delta, build_out;
  rank_build->add_option("--delta", build_delta, "rank expression")->required();
  rank_build->add_option("--out", build_out, "artifact path")->required();
  rank_build->callback([&] {
    OrderTypePtr delta = parse_order_type(build_delta);
    ChiStructure chi = build_chi(delta, g.seed);
    write_artifact(build_out, chi.to_json());
    emit_value(out, g,
               {{"delta", to_string(delta)},
                {"seed", g.seed},
                {"out", build_out}},
               "wrote contraction over " + to_string(delta) + " (seed " +
                   std::to_string(g.seed) + ") to " + build_out);
  });

  std::string rank_chi, rank_elem;
  auto add_rank_query = [&](const char* name, const char* desc) {
    auto* sub = rank->add_subcommand(name, desc);
    sub->fallthrough();
    sub->add_option("--chi", rank_chi, "structure artifact")->required();
    sub->add_option("--element", rank_elem, "group element literal")
        ->required();
    return sub;
  };

  add_rank_query("apply", "image of a negative element")->callback([&] {
    ChiStructure chi = ChiStructure::from_json(read_artifact(rank_chi));
    HahnElement gel = parse_group_element(rank_elem);
    HahnElement image = chi.chi(gel);
    emit_value(out, g,
               {{"element", hahn_to_string(gel)},
                {"image", hahn_to_string(image)}},
               hahn_to_string(image));
  });

  add_rank_query("class", "rank label of a negative element")->callback([&] {
    ChiStructure chi = ChiStructure::from_json(read_artifact(rank_chi));
    HahnElement gel = parse_group_element(rank_elem);
    std::string label = element_to_string(chi.delta(), chi.class_of(gel));
    emit_value(out, g,
               {{"element", hahn_to_string(gel)}, {"class", label}}, label);
  });

  add_rank_query("shift", "induced valuation shift at the leading exponent")
      ->callback([&] {
        ChiStructure chi = ChiStructure::from_json(read_artifact(rank_chi));
        HahnElement gel = parse_group_element(rank_elem);
        Rat q = hahn_vg(gel)->q;
        Rat image = chi.shift(q);
        emit_value(out, g,
                   {{"q", rat_to_string(q)}, {"shift", rat_to_string(image)}},
                   "shift(" + rat_to_string(q) + ") = " + rat_to_string(image));
      });

  auto* rank_check = rank->add_subcommand("check", "sampled contraction laws");
  rank_check->fallthrough();
  std::string check_chi;
  rank_check->add_option("--chi", check_chi, "structure artifact")->required();
  rank_check->callback([&] {
    ChiStructure chi = ChiStructure::from_json(read_artifact(check_chi));
    ContractionCheckReport rep = check_contraction(chi, g.samples, g.seed);

    // Cross-check the budgeted equivalence probe against the exact labels on
    // an independent stream.
    std::mt19937_64 rng(g.seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
    std::size_t pairs = g.samples / 4 + 8;
    std::size_t unknown = 0;
    std::vector<std::string> disagreements;
    for (std::size_t i = 0; i < pairs; ++i) {
      HahnElement a = sample_cone_element(rng, true);
      HahnElement b = sample_cone_element(rng, true);
      EquivResult r = equiv_budgeted(chi, a, b, g.budget);
      if (r == EquivResult::Unknown) {
        ++unknown;
        continue;
      }
      bool same = elements_equal(chi.delta(), chi.class_of(a), chi.class_of(b));
      if ((r == EquivResult::Equivalent) != same) {
        disagreements.push_back("equiv: g=" + hahn_to_string(a) +
                                " h=" + hahn_to_string(b) + " answered " +
                                to_string(r) +
                                " but the labels say otherwise");
      }
    }

    bool ok = rep.passed() && disagreements.empty();
    if (g.json()) {
      nlohmann::json j{{"contraction",
                        {{"samples", rep.samples},
                         {"pairs_tested", rep.pairs_tested},
                         {"seed", rep.seed},
                         {"violations", rep.violations}}},
                       {"equiv",
                        {{"pairs", pairs},
                         {"budget", g.budget},
                         {"unknown", unknown},
                         {"violations", disagreements}}}};
      out << j.dump(2) << "\n";
    } else {
      out << "contraction" << (rep.passed() ? ": pass" : ": FAIL")
          << " (samples=" << rep.samples << ", pairs=" << rep.pairs_tested
          << ", seed=" << rep.seed << ")\n";
      for (const auto& v : rep.violations) out << "  " << v << "\n";
      out << "equiv" << (disagreements.empty() ? ": pass" : ": FAIL")
          << " (pairs=" << pairs << ", budget=" << g.budget
          << ", unknown=" << unknown << ")\n";
      for (const auto& v : disagreements) out << "  " << v << "\n";
    }
    rc = ok ? 0 : 1;
  });

  // exists: the synthesis existence test. Both answers exit 0.
  auto* exists = app.add_subcommand("exists", "can the rank carry a synthesis");
  exists->fallthrough();
  std::string exists_delta;
  exists->add_option("--delta", exists_delta, "rank expression")->required();
  exists->callback([&] {
    OrderTypePtr delta = parse_order_type(exists_delta);
    ExistsDecision d = exists_transexp(delta);
    emit_value(out, g,
               {{"delta", to_string(delta)},
                {"yes", d.yes},
                {"reason", d.reason}},
               d.yes ? "yes" : "no: " + d.reason);
  });

  // synth: synthesis maps and their term algebra.
  auto* synth = app.add_subcommand("synth", "synthesis maps");
  synth->require_subcommand(1);
  synth->fallthrough();

  auto* synth_phi = synth->add_subcommand("phi", "build and save a map");
  synth_phi->fallthrough();
  std::string phi_chi, phi_mode, phi_out;
  synth_phi->add_option("--chi", phi_chi, "structure artifact")->required();
  synth_phi->add_option("--mode", phi_mode, "generic, growth or nogrowth")
      ->required()
      ->check(CLI::IsMember({"generic", "growth", "nogrowth"}));
  synth_phi->add_option("--out", phi_out, "artifact path")->required();
  synth_phi->callback([&] {
    ChiStructure chi = ChiStructure::from_json(read_artifact(phi_chi));
    PhiMap phi = build_phi(std::move(chi), parse_phi_mode(phi_mode), g.seed);
    write_artifact(phi_out, phi.to_json());
    emit_value(out, g,
               {{"mode", to_string(phi.mode())},
                {"seed", g.seed},
                {"delta", to_string(phi.delta())},
                {"out", phi_out}},
               "wrote synthesis map (mode " + to_string(phi.mode()) +
                   ", seed " + std::to_string(g.seed) + ") over " +
                   to_string(phi.delta()) + " to " + phi_out);
  });

  auto* synth_tl = synth->add_subcommand("tl", "term at an index and offset");
  synth_tl->fallthrough();
  std::string tl_phi, tl_a, tl_b;
  synth_tl->add_option("--phi", tl_phi, "map artifact")->required();
  synth_tl->add_option("--a", tl_a, "positive index literal")->required();
  synth_tl->add_option("--b", tl_b, "rational offset")->required();
  synth_tl->callback([&] {
    PhiMap phi = PhiMap::from_json(read_artifact(tl_phi));
    AIndex a = make_aindex(parse_group_element(tl_a));
    PTerm p = tl_apply(phi, a, parse_rational(tl_b));
    emit_value(out, g,
               {{"a", hahn_to_string(p.a)},
                {"k", int_to_string(p.k)},
                {"t", rat_to_string(p.t)},
                {"term", pterm_to_string(p)}},
               pterm_to_string(p));
  });

  auto* synth_cmp = synth->add_subcommand("compare", "three-way term order");
  synth_cmp->fallthrough();
  std::string cmp_phi, cmp_left, cmp_right;
  synth_cmp->add_option("--phi", cmp_phi, "map artifact")->required();
  synth_cmp->add_option("left", cmp_left, "term literal")->required();
  synth_cmp->add_option("right", cmp_right, "term literal")->required();
  synth_cmp->callback([&] {
    PhiMap phi = PhiMap::from_json(read_artifact(cmp_phi));
    PTerm p = parse_pterm(phi, cmp_left);
    PTerm q = parse_pterm(phi, cmp_right);
    int c = pterm_compare(phi, p, q);
    std::string verdict = c < 0 ? "LT" : (c > 0 ? "GT" : "EQ");
    emit_value(out, g, {{"result", verdict}}, verdict);
  });

  auto* synth_xt = synth->add_subcommand("xt", "induced class of an element");
  synth_xt->fallthrough();
  std::string xt_phi, xt_g;
  synth_xt->add_option("--phi", xt_phi, "map artifact")->required();
  synth_xt->add_option("--g", xt_g, "negative element literal")->required();
  synth_xt->callback([&] {
    PhiMap phi = PhiMap::from_json(read_artifact(xt_phi));
    HahnElement gel = parse_group_element(xt_g);
    std::string cls = element_to_string(phi.delta(), phi.chi().class_of(gel));
    std::string xt = element_to_string(phi.delta(), xt_class(phi, gel));
    emit_value(out, g,
               {{"g", hahn_to_string(gel)}, {"class", cls}, {"xt", xt}}, xt);
  });

  auto* synth_check = synth->add_subcommand("check", "sampled synthesis laws");
  synth_check->fallthrough();
  std::string sc_phi;
  synth_check->add_option("--phi", sc_phi, "map artifact")->required();
  synth_check->callback([&] {
    PhiMap phi = PhiMap::from_json(read_artifact(sc_phi));
    SynthCheckReport rep = check_synthesis(phi, g.samples, g.seed);
    GrowthEncodingReport enc = check_growth_encoding(phi, g.samples, g.seed);
    bool ok = rep.passed() && enc.passed();
    if (g.json()) {
      nlohmann::json j{{"synthesis", rep.to_json()},
                       {"encoding", enc.to_json()}};
      out << j.dump(2) << "\n";
    } else {
      out << "synthesis[" << to_string(rep.mode) << "]"
          << (rep.passed() ? ": pass" : ": FAIL") << " (checks=" << rep.checks
          << ", samples=" << rep.samples << ", seed=" << rep.seed << ")\n";
      for (const auto& v : rep.violations) out << "  " << v << "\n";
      out << "encoding[" << to_string(enc.mode) << "]"
          << (enc.passed() ? ": pass" : ": FAIL") << " (strict=" << enc.strict
          << ", non_strict=" << enc.non_strict << ")\n";
      for (const auto& w : enc.witnesses) out << "  witness: " << w << "\n";
    }
    rc = ok ? 0 : 1;
  });

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("towerctl");
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }
  return rc;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  try {
    return run_impl(args, out, err);
  } catch (const UnsupportedConstruction& e) {
    err << "unsupported construction: " << e.what() << "\n";
    return 4;
  } catch (const PrecisionError& e) {
    err << "precision exhausted: " << e.what() << "\n";
    return 3;
  } catch (const StructuralError& e) {
    err << "invalid artifact: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "invalid artifact: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace tower
