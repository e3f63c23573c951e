#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "adscurv/errors.hpp"
#include "adscurv/pipeline.hpp"

using namespace adscurv;

namespace {

void print_summary(const RunResult& res) {
  for (const auto& r : res.reports)
    std::printf("%-40s %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL");
  if (const Report* f = res.first_failure())
    std::fprintf(stderr, "first failing check: %s (%s)\n", f->name.c_str(), f->anchor.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for convex space-like surfaces in AdS3 and their cone-metric approximations"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  RunConfig cfg;
  std::string eps_text, only_text;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--out", cfg.out_dir, "output directory for reports and tables");
    sub->add_option("--samples", cfg.samples, "sample count for sampled checks");
    sub->add_option("--pairs", cfg.pairs, "number of sampled distance pairs");
  };

  auto* surface = app.add_subcommand("surface", "induced distance on a graph surface over the octagon");
  surface->add_option("--fn", cfg.fn, "zero | const:R | cone:h0 | smoothed:h0,rho | envelope:seed=N");
  surface->add_option("--h", cfg.h, "mesh covering radius");
  common(surface);

  auto* approx = app.add_subcommand("approx", "comparison-triangle cone surfaces for a source metric");
  approx->add_option("--src", cfg.src, "u0 | const:R");
  approx->add_option("--eps", eps_text, "comma-separated epsilon list");
  approx->add_option("--steiner", cfg.steiner, "Steiner points per edge");
  approx->add_option("--input", cfg.input, "triangulation JSON to check instead of a source");
  common(approx);

  auto* verify = app.add_subcommand("verify", "property suite");
  verify->add_option("--only", only_text, "comma-separated check or module names");
  verify->add_option("--input", cfg.input, "triangulation JSON to check as well");
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (!eps_text.empty()) cfg.eps = parse_list(eps_text);
    if (!only_text.empty()) {
      std::stringstream ss(only_text);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) cfg.only.push_back(item);
    }
    RunResult res;
    if (cfg.command == "surface") res = cmd_surface(cfg);
    else if (cfg.command == "approx") res = cmd_approx(cfg);
    else res = cmd_verify(cfg);
    write_outputs(cfg, res);
    print_summary(res);
    return res.exit_code();
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const BadTriangle& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const EpsilonTooLarge& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const OutOfRange& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "check failure: %s\n", e.what());
    return 1;
  }
}
