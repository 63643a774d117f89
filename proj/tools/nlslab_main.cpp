/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Command line entry point: run <config.json>, audit-resonance, version.
 *
 *****************************************************************************/

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nlslab/resonance.hpp"
#include "nlslab/scenario.hpp"

namespace {
constexpr const char* kVersion = "nlslab 1.0.0";
}

int main(int argc, char** argv) {
  CLI::App app{"spectral laboratory for the periodic NLS with 1/t coupling"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "run a scenario from a flat JSON config");
  run->add_option("config", config_path, "path to the config file")->required();

  double audit_r = 0.25;
  std::int64_t audit_radius = 64;
  CLI::App* audit =
      app.add_subcommand("audit-resonance", "exhaustive multiplier bound audit at K and 2K");
  audit->add_option("--r", audit_r, "weight exponent in [0, 1/2)")->required();
  audit->add_option("--K", audit_radius, "mode radius")->required();

  CLI::App* version = app.add_subcommand("version", "print the version string");

  CLI11_PARSE(app, argc, argv);

  if (version->parsed()) {
    std::cout << kVersion << "\n";
    return 0;
  }
  if (audit->parsed()) {
    try {
      std::cout << "r,K,constant,k,j1,j2,j3\n";
      std::cout.precision(17);
      for (std::int64_t radius : {audit_radius, 2 * audit_radius}) {
        const nlslab::PhiBoundAudit a = nlslab::phi_bound_audit(audit_r, radius);
        std::cout << a.r << ',' << a.radius << ',' << a.constant << ',' << a.argmax.k << ','
                  << a.argmax.j1 << ',' << a.argmax.j2 << ',' << a.argmax.j3 << "\n";
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return nlslab::kExitValidation;
    }
    return 0;
  }
  return nlslab::run_scenario(config_path, std::cerr);
}
