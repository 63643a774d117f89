/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Scenario runner: flat-JSON configs, named experiments, deterministic
 * output trees with hashed manifests.
 *
 *****************************************************************************/

#ifndef NLSLAB_SCENARIO_HPP
#define NLSLAB_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "nlslab/scattering.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {

/// Exit-code contract of the runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Random H^s-style profile: fhat(j) = <j>^{-s - 1/2 - 0.01} g_j with g_j
/// independent complex standard Gaussians drawn in ascending j from one
/// mt19937_64 stream seeded by `seed` (polar draw g = sqrt(-ln u1) e^{2 pi i u2}).
/// Bit-reproducible for a fixed seed.
ProfileSpec random_profile(std::uint64_t seed, int radius, double s);

/// Runs the scenario described by the flat JSON file at config_path. Output
/// files land under <output_root>/<scenario>_<seed>_<stamp>/; output_root is
/// taken from the config ("output_root"), else $NLSLAB_OUTPUT_ROOT, else
/// "runs". Returns an exit code (0 ok, 2 validation failure, 3 numerical
/// abort) and never throws. Progress and errors go to `log`.
int run_scenario(const std::filesystem::path& config_path, std::ostream& log);

/// Same, from an in-memory JSON text (used by tests).
int run_scenario_text(const std::string& config_json, std::ostream& log,
                      std::filesystem::path* run_dir_out = nullptr);

/// ScatteringSummary / NormReport serialization (documented key set).
std::string summary_to_json(const ScatteringSummary& summary, std::uint64_t config_hash);
std::string norm_report_to_json(const NormReport& report, std::uint64_t config_hash);

}  // namespace nlslab

#endif
