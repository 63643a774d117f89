/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 *****************************************************************************/

#include "nlslab/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "nlslab/binormal.hpp"
#include "nlslab/evolve.hpp"
#include "nlslab/pseudoconformal.hpp"
#include "nlslab/resonance.hpp"

namespace nlslab {

using nlohmann::json;
namespace fs = std::filesystem;

ProfileSpec random_profile(std::uint64_t seed, int radius, double s) {
  if (radius < 0) throw std::invalid_argument("random_profile: negative radius");
  if (!(s > 0.0)) throw std::invalid_argument("random_profile: s must be positive");
  std::mt19937_64 rng(seed);
  ProfileSpec spec;
  spec.sobolev_s = s;
  spec.fhat.resize(static_cast<std::size_t>(2 * radius + 1));
  const double exponent = -s - 0.51;
  for (int j = -radius; j <= radius; ++j) {
    // Polar complex standard Gaussian from two uniform draws; E|g|^2 = 1.
    const double u1 =
        (static_cast<double>(rng()) + 1.0) / 18446744073709551616.0;  // (0, 1]
    const double u2 = static_cast<double>(rng()) / 18446744073709551616.0;
    const cplx g = std::polar(std::sqrt(-std::log(u1)), 2.0 * std::numbers::pi * u2);
    spec.fhat[static_cast<std::size_t>(j + radius)] =
        std::pow(bracket(static_cast<double>(j)), exponent) * g;
  }
  return spec;
}

namespace {

struct ScenarioConfig {
  std::string scenario;
  std::uint64_t seed = 0;
  int K = 8;
  double tau_end = 100.0;
  double dt_log = 1e-3;
  double tolerance = 1e-10;
  std::string method = "strang_splitting";
  int snapshots_per_decade = 64;
  bool determinism = true;
  std::string output_root;

  // single_mode / binormal
  cplx alpha{0.5, 0.0};
  // random-data scenarios
  double sobolev_s = 0.3;
  double norm_s = 0.3;
  // resonance_audit
  double audit_r = 0.25;
  std::int64_t audit_radius = 64;
  // time_fourier
  std::vector<int> nu_list{4, 8, 16, 32};
  double lambda_max = 6.0;
  int lambda_count = 13;
  double window_dt = 0.01;
  // energy_law
  int density_points = 257;
  // binormal
  std::string binormal_case = "self_similar";
  double corner_alpha = 0.04;
  double perturbation = 0.0;
  double x_min = -3.0, x_max = 3.0;
  int half_samples = 8192;
  double delta = 0.75;
  int t_halvings = 7;

  json canonical;  // echo of the parsed keys, for hashing
};

const std::vector<std::string> kScenarios = {"single_mode", "scattering",      "norms",
                                             "blowup",      "binormal",        "resonance_audit",
                                             "energy_law",  "time_fourier"};

ScenarioConfig parse_config(const json& j) {
  ScenarioConfig c;
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  if (!j.contains("scenario")) throw std::invalid_argument("config: missing 'scenario'");
  c.scenario = j.at("scenario").get<std::string>();
  bool known = false;
  for (const auto& name : kScenarios) known = known || name == c.scenario;
  if (!known) throw std::invalid_argument("config: unknown scenario '" + c.scenario + "'");

  auto get = [&](const char* key, auto& slot) {
    if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
  };
  get("seed", c.seed);
  get("K", c.K);
  get("tau_end", c.tau_end);
  get("dt_log", c.dt_log);
  get("tolerance", c.tolerance);
  get("method", c.method);
  get("snapshots_per_decade", c.snapshots_per_decade);
  get("determinism", c.determinism);
  get("output_root", c.output_root);
  double are = c.alpha.real(), aim = c.alpha.imag();
  get("alpha_re", are);
  get("alpha_im", aim);
  c.alpha = cplx(are, aim);
  get("sobolev_s", c.sobolev_s);
  get("norm_s", c.norm_s);
  get("r", c.audit_r);
  get("radius", c.audit_radius);
  get("nu_list", c.nu_list);
  get("lambda_max", c.lambda_max);
  get("lambda_count", c.lambda_count);
  get("window_dt", c.window_dt);
  get("density_points", c.density_points);
  get("binormal_case", c.binormal_case);
  get("corner_alpha", c.corner_alpha);
  get("perturbation", c.perturbation);
  get("x_min", c.x_min);
  get("x_max", c.x_max);
  get("half_samples", c.half_samples);
  get("delta", c.delta);
  get("t_halvings", c.t_halvings);

  if (c.method != "strang_splitting" && c.method != "adaptive_rk")
    throw std::invalid_argument("config: method must be strang_splitting or adaptive_rk");
  if (c.scenario != "resonance_audit" && !(c.tau_end > 1.0))
    throw std::invalid_argument("config: tau_end must exceed 1");

  c.canonical = j;
  c.canonical["scenario"] = c.scenario;
  c.canonical["seed"] = c.seed;
  return c;
}

SimConfig sim_config_of(const ScenarioConfig& c) {
  SimConfig sc;
  sc.K = c.K;
  sc.tau_end = c.tau_end;
  sc.dt_initial = c.dt_log;
  sc.tolerance = c.tolerance;
  sc.method = c.method == "adaptive_rk" ? Method::adaptive_rk : Method::strang_splitting;
  sc.snapshots_per_decade = c.snapshots_per_decade;
  sc.determinism = c.determinism;
  return sc;
}

/// Output sink that remembers every file for the manifest.
class RunDir {
 public:
  RunDir(fs::path dir, std::uint64_t config_hash, std::uint64_t seed)
      : dir_(std::move(dir)), hash_(config_hash), seed_(seed) {
    fs::create_directories(dir_);
  }

  const fs::path& path() const { return dir_; }
  std::uint64_t config_hash() const { return hash_; }

  std::string header_line() const {
    return "config_hash=" + to_hex(hash_) + " seed=" + std::to_string(seed_);
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream os(dir_ / name, std::ios::binary);
    os << content;
    if (!os) throw std::runtime_error("failed to write " + name);
    files_.push_back({name, content.size(), fnv1a64(content)});
  }

  void finalize(const std::string& scenario) {
    json manifest;
    manifest["scenario"] = scenario;
    manifest["seed"] = seed_;
    manifest["config_hash"] = to_hex(hash_);
    manifest["files"] = json::array();
    for (const auto& f : files_)
      manifest["files"].push_back(
          {{"name", f.name}, {"bytes", f.bytes}, {"fnv1a64", to_hex(f.hash)}});
    std::ofstream os(dir_ / "manifest.json", std::ios::binary);
    os << manifest.dump(2) << "\n";
    if (!os) throw std::runtime_error("failed to write manifest.json");
  }

 private:
  struct Entry {
    std::string name;
    std::size_t bytes;
    std::uint64_t hash;
  };
  fs::path dir_;
  std::uint64_t hash_;
  std::uint64_t seed_;
  std::vector<Entry> files_;
};

std::string csv_of_trajectory(const Trajectory& traj, const std::string& header) {
  std::ostringstream os;
  write_trajectory_csv(os, traj, {header});
  return os.str();
}

json summary_json(const ScatteringSummary& s, std::uint64_t hash) {
  json out;
  out["config_hash"] = to_hex(hash);
  out["M"] = s.M;
  json bre = json::array(), bim = json::array(), are = json::array(), aim = json::array();
  for (const cplx& b : s.beta) {
    bre.push_back(b.real());
    bim.push_back(b.imag());
  }
  for (const cplx& a : s.alpha) {
    are.push_back(a.real());
    aim.push_back(a.imag());
  }
  out["beta_re"] = bre;
  out["beta_im"] = bim;
  out["alpha_re"] = are;
  out["alpha_im"] = aim;
  out["rate_slope"] = s.rate_slope;
  out["rate_constant"] = s.rate_constant;
  out["exact"] = s.exact;
  return out;
}

json norms_json(const NormReport& r, std::uint64_t hash) {
  json out;
  out["config_hash"] = to_hex(hash);
  out["s"] = r.s;
  out["values"] = r.values;
  out["sup_ratio"] = r.sup_ratio;
  out["trend_slope"] = r.trend_slope;
  return out;
}

ModeVector single_mode_initial(int radius, cplx amplitude, cplx second = cplx(0.0, 0.0)) {
  ProfileSpec spec;
  spec.fhat.assign(static_cast<std::size_t>(2 * radius + 1), cplx(0.0, 0.0));
  spec.fhat[static_cast<std::size_t>(radius)] = std::conj(amplitude);
  if (second != cplx(0.0, 0.0) && radius >= 1)
    spec.fhat[static_cast<std::size_t>(radius + 1)] =
        std::conj(second) * std::polar(1.0, 0.25);
  // conj/phase chosen so B_0(1) = amplitude and B_1(1) = second exactly.
  return modes_from_profile(spec);
}

void run_single_mode(const ScenarioConfig& c, RunDir& out) {
  SimConfig sc = sim_config_of(c);
  const ModeVector initial = single_mode_initial(c.K, c.alpha);
  const Trajectory traj = integrate(initial, sc);
  out.write("trajectory.csv", csv_of_trajectory(traj, out.header_line()));

  const ScatteringSummary summary = extract_asymptotics(traj);
  out.write("summary.json", summary_json(summary, out.config_hash()).dump(2) + "\n");

  std::ostringstream snap;
  write_snapshot(snap, traj.state(traj.size() - 1));
  out.write("final_state.nlsb", snap.str());

  json extra;
  extra["config_hash"] = to_hex(out.config_hash());
  extra["mass_drift"] = mass_drift(traj);
  double law_error = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const cplx expected =
        c.alpha * std::polar(1.0, -std::norm(c.alpha) * std::log(traj.times[i]));
    law_error = std::max(law_error,
                         std::abs(traj.states[i][static_cast<std::size_t>(traj.K)] - expected));
  }
  extra["single_mode_law_error"] = law_error;
  out.write("diagnostics.json", extra.dump(2) + "\n");
}

void run_scattering_like(const ScenarioConfig& c, RunDir& out, bool with_norms,
                         bool with_blowup) {
  SimConfig sc = sim_config_of(c);
  const ProfileSpec profile = random_profile(c.seed, c.K, c.sobolev_s);
  const ModeVector initial = modes_from_profile(profile);
  const Trajectory traj = integrate(initial, sc);
  out.write("trajectory.csv", csv_of_trajectory(traj, out.header_line()));

  const ScatteringSummary summary = extract_asymptotics(traj);
  out.write("summary.json", summary_json(summary, out.config_hash()).dump(2) + "\n");

  if (with_norms) {
    const NormReport rep = norm_monitor(traj, c.norm_s);
    out.write("norms.json", norms_json(rep, out.config_hash()).dump(2) + "\n");
  }
  if (with_blowup) {
    const RateFit fit = blowup_law_check(traj, summary);
    json bj;
    bj["config_hash"] = to_hex(out.config_hash());
    bj["slope"] = fit.slope;
    bj["constant"] = fit.constant;
    bj["exact"] = fit.exact;
    out.write("blowup_law.json", bj.dump(2) + "\n");

    // Focusing-picture dumps at the smallest supported t.
    const double t = 1.0 / traj.times.back();
    const BlowupFrame frame = frame_from_trajectory(traj, t);
    json fj;
    fj["config_hash"] = to_hex(out.config_hash());
    fj["t"] = frame.t;
    json fre = json::array(), fim = json::array();
    for (const cplx& a : frame.A) {
      fre.push_back(a.real());
      fim.push_back(a.imag());
    }
    fj["A_re"] = fre;
    fj["A_im"] = fim;
    out.write("frame.json", fj.dump(2) + "\n");

    std::vector<double> xs;
    for (int i = -64; i <= 64; ++i) xs.push_back(static_cast<double>(i) / 32.0);
    const UField u = evaluate_u(frame, xs, frame.K);
    std::ostringstream uf;
    uf << "# " << out.header_line() << "\n";
    uf << "t,x,re_u,im_u,abs_u\n";
    uf.precision(17);
    for (std::size_t i = 0; i < xs.size(); ++i)
      uf << t << ',' << xs[i] << ',' << u.values[i].real() << ',' << u.values[i].imag() << ','
         << std::abs(u.values[i]) << "\n";
    out.write("ufield.csv", uf.str());
  }
}

void run_resonance_audit(const ScenarioConfig& c, RunDir& out) {
  if (!(c.audit_r >= 0.0) || c.audit_r >= 0.5)
    throw std::invalid_argument("resonance_audit: r must lie in [0, 1/2)");
  std::ostringstream os;
  os << "# " << out.header_line() << "\n";
  os << "r,K,constant,k,j1,j2,j3\n";
  os.precision(17);
  for (std::int64_t radius : {c.audit_radius, 2 * c.audit_radius}) {
    const PhiBoundAudit audit = phi_bound_audit(c.audit_r, radius);
    os << audit.r << ',' << audit.radius << ',' << audit.constant << ',' << audit.argmax.k
       << ',' << audit.argmax.j1 << ',' << audit.argmax.j2 << ',' << audit.argmax.j3 << "\n";
  }
  out.write("audit.csv", os.str());

  // Divisor statistics: max of (#pairs)/|m|^{0.4} over 1 <= m <= M0.
  std::ostringstream ds;
  ds << "# " << out.header_line() << "\n";
  ds << "M0,max_ratio,argmax_m\n";
  ds.precision(17);
  double best = 0.0;
  std::int64_t best_m = 1;
  for (std::int64_t m = 1; m <= 10000; ++m) {
    const double ratio =
        2.0 * divisor_count(m) / std::pow(static_cast<double>(m), 0.4);
    if (ratio > best) {
      best = ratio;
      best_m = m;
    }
    if (m == 1000 || m == 10000) ds << m << ',' << best << ',' << best_m << "\n";
  }
  out.write("divisor_stats.csv", ds.str());
}

void run_energy_law(const ScenarioConfig& c, RunDir& out) {
  SimConfig sc = sim_config_of(c);
  // Uniform snapshot ladder so that thinning halves the density exactly.
  const int n = c.density_points;
  if (n < 17 || (n - 1) % 4 != 0)
    throw std::invalid_argument("energy_law: density_points must be 4m+1 and >= 17");
  sc.extra_snapshot_times.clear();
  for (int i = 0; i < n; ++i)
    sc.extra_snapshot_times.push_back(
        1.0 + (sc.tau_end - 1.0) * static_cast<double>(i) / static_cast<double>(n - 1));

  // Spectrally smooth data: Gaussian modulus decay, random phases.
  ProfileSpec profile = random_profile(c.seed, c.K, 1.0);
  const double j0 = std::max(2.0, static_cast<double>(c.K) / 4.0);
  for (int j = -c.K; j <= c.K; ++j) {
    const cplx g = profile.fhat[static_cast<std::size_t>(j + c.K)];
    const cplx phase = std::abs(g) > 0.0 ? g / std::abs(g) : cplx(1.0, 0.0);
    profile.fhat[static_cast<std::size_t>(j + c.K)] =
        0.4 * std::exp(-std::pow(static_cast<double>(j) / j0, 2.0)) * phase;
  }
  const Trajectory traj = integrate(modes_from_profile(profile), sc);

  // Sub-trajectories on the uniform ladder at full, half, quarter density.
  auto subset = [&](int stride) {
    Trajectory sub;
    sub.config = traj.config;
    sub.K = traj.K;
    for (int i = 0; i < n; i += stride) {
      const double t = sc.extra_snapshot_times[static_cast<std::size_t>(i)];
      const auto idx = traj.index_of_time(t);
      if (!idx) throw std::runtime_error("energy_law: ladder snapshot missing");
      sub.times.push_back(traj.times[*idx]);
      sub.states.push_back(traj.states[*idx]);
      sub.quadrature.push_back(traj.quadrature[*idx]);
    }
    return sub;
  };
  const double res_full = energy_law_residual(subset(1));
  const double res_half = energy_law_residual(subset(2));
  const double res_quarter = energy_law_residual(subset(4));

  json ej;
  ej["config_hash"] = to_hex(out.config_hash());
  ej["residual_full"] = res_full;
  ej["residual_half"] = res_half;
  ej["residual_quarter"] = res_quarter;
  ej["ratio_half_full"] = res_half / res_full;
  ej["ratio_quarter_half"] = res_quarter / res_half;
  out.write("energy_law.json", ej.dump(2) + "\n");

  std::ostringstream es;
  es << "# " << out.header_line() << "\n";
  es << "tau,energy\n";
  es.precision(17);
  for (std::size_t i = 0; i < traj.size(); ++i)
    es << traj.times[i] << ',' << energy(traj.state(i)) << "\n";
  out.write("energy.csv", es.str());
}

void run_time_fourier(const ScenarioConfig& c, RunDir& out) {
  SimConfig sc = sim_config_of(c);
  int nu_max = 2;
  for (int nu : c.nu_list) nu_max = std::max(nu_max, nu);
  if (sc.tau_end < static_cast<double>(nu_max) + 2.5)
    throw std::invalid_argument("time_fourier: tau_end too small for the window list");
  for (int nu : c.nu_list) {
    const double lo = static_cast<double>(nu) - 1.0;
    const double hi = static_cast<double>(nu) + 2.0;
    for (double t = lo; t <= hi + 1e-12; t += c.window_dt)
      sc.extra_snapshot_times.push_back(std::max(1.0, t));
  }
  const ProfileSpec profile = random_profile(c.seed, c.K, c.sobolev_s);
  const Trajectory traj = integrate(modes_from_profile(profile), sc);

  std::vector<double> lambdas;
  for (int i = 0; i < c.lambda_count; ++i)
    lambdas.push_back(c.lambda_max * static_cast<double>(i) /
                      std::max(1, c.lambda_count - 1));

  std::ostringstream ts;
  ts << "# " << out.header_line() << "\n";
  ts << "nu,max_magnitude\n";
  ts.precision(17);
  std::vector<double> lx, ly;
  for (int nu : c.nu_list) {
    const WindowedFourierTable table = windowed_time_fourier(traj, nu, lambdas);
    ts << nu << ',' << table.max_magnitude << "\n";
    lx.push_back(std::log(static_cast<double>(nu)));
    ly.push_back(std::log(table.max_magnitude));
  }
  out.write("time_fourier.csv", ts.str());

  json tj;
  tj["config_hash"] = to_hex(out.config_hash());
  tj["nu_list"] = c.nu_list;
  tj["nu_slope"] = fit_line(lx, ly).slope;
  out.write("time_fourier.json", tj.dump(2) + "\n");
}

std::string filaments_csv(const std::vector<Filament>& fils, const std::string& header) {
  std::ostringstream os;
  os << "# " << header << "\n";
  os << "t,x,chi_x,chi_y,chi_z,T_x,T_y,T_z\n";
  os.precision(17);
  for (const Filament& f : fils) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      os << f.t << ',' << f.x(i) << ',' << f.chi[i].x << ',' << f.chi[i].y << ','
         << f.chi[i].z << ',' << f.tangent[i].x << ',' << f.tangent[i].y << ','
         << f.tangent[i].z << "\n";
    }
  }
  return os.str();
}

std::string filament_obj(const Filament& f) {
  std::ostringstream os;
  os.precision(12);
  for (std::size_t i = 0; i < f.size(); ++i)
    os << "v " << f.chi[i].x << ' ' << f.chi[i].y << ' ' << f.chi[i].z << "\n";
  os << "l";
  for (std::size_t i = 1; i <= f.size(); ++i) os << ' ' << i;
  os << "\n";
  return os.str();
}

void run_binormal(const ScenarioConfig& c, RunDir& out) {
  SimConfig sc = sim_config_of(c);
  json bj;
  bj["config_hash"] = to_hex(out.config_hash());
  bj["case"] = c.binormal_case;

  // March grid: uniform tau ladder dense enough to resolve the e^{i j^2/4t}
  // translate phases (period 8 pi in tau per unit j^2).
  for (double t = 1.0; t <= sc.tau_end + 1e-9; t += 0.25)
    sc.extra_snapshot_times.push_back(std::min(t, sc.tau_end));

  std::vector<double> times;
  for (int nH = 0; nH <= c.t_halvings; ++nH) times.push_back(std::pow(2.0, -nH));
  for (double t : times)
    sc.extra_snapshot_times.push_back(1.0 / t);

  ModeVector initial(0, 1.0);
  int K = c.K;
  if (c.binormal_case == "self_similar") {
    K = std::max(K, 1);
    initial = single_mode_initial(K, c.alpha, cplx(c.perturbation, 0.0));
  } else if (c.binormal_case == "corner_single") {
    K = std::max(K, 1);
    initial = single_mode_initial(K, cplx(c.corner_alpha, 0.0));
  } else if (c.binormal_case == "corner_multi") {
    K = std::max(K, 1);
    ProfileSpec spec;
    spec.fhat.assign(static_cast<std::size_t>(2 * K + 1), cplx(0.0, 0.0));
    // Three active translates with distinct moduli and phases.
    spec.fhat[static_cast<std::size_t>(K - 1)] = std::conj(c.corner_alpha * cplx(0.9, 0.2));
    spec.fhat[static_cast<std::size_t>(K)] = std::conj(c.corner_alpha * cplx(1.0, 0.0));
    spec.fhat[static_cast<std::size_t>(K + 1)] = std::conj(c.corner_alpha * cplx(0.7, -0.4));
    initial = modes_from_profile(spec);
  } else {
    throw std::invalid_argument("binormal: unknown case '" + c.binormal_case + "'");
  }
  sc.K = K;

  const Trajectory traj = integrate(initial, sc);

  AdvanceParams params;
  params.anchor_x = 0.0;
  params.x_min = c.x_min;
  params.x_max = c.x_max;
  params.half_samples = static_cast<std::size_t>(c.half_samples);
  const FilamentFlow flow = advance_filament(traj, times, FrameAnchor{}, params);

  out.write("filaments.csv", filaments_csv(flow.filaments, out.header_line()));
  out.write("filament_final.obj", filament_obj(flow.filaments.back()));
  bj["mixed_partials_residual"] = flow.mixed_partials_residual;
  bj["flagged"] = flow.flagged;

  if (c.binormal_case == "self_similar") {
    bj["self_similarity_residual"] = self_similarity_check(flow.filaments);
  } else {
    const std::vector<int> probes =
        c.binormal_case == "corner_multi" ? std::vector<int>{-1, 0, 1} : std::vector<int>{0};
    std::ostringstream cs;
    cs << "# " << out.header_line() << "\n";
    cs << "t,delta,j,theta\n";
    cs.precision(17);
    json corner = json::object();
    for (int j : probes) {
      for (double delta : {c.delta, 2.0 * c.delta}) {
        const std::vector<double> theta = corner_angles(flow.filaments, j, delta);
        for (std::size_t i = 0; i < theta.size(); ++i)
          cs << times[i] << ',' << delta << ',' << j << ',' << theta[i] << "\n";
        if (delta == c.delta) {
          json diffs = json::array();
          for (std::size_t i = 1; i < theta.size(); ++i)
            diffs.push_back(std::abs(theta[i] - theta[i - 1]));
          corner["theta_j" + std::to_string(j)] = theta;
          corner["cauchy_j" + std::to_string(j)] = diffs;
        }
      }
    }
    bj["corner"] = corner;
    out.write("corner_angles.csv", cs.str());
  }
  out.write("binormal.json", bj.dump(2) + "\n");
}

int dispatch(const ScenarioConfig& c, RunDir& out) {
  if (c.scenario == "single_mode")
    run_single_mode(c, out);
  else if (c.scenario == "scattering")
    run_scattering_like(c, out, false, false);
  else if (c.scenario == "norms")
    run_scattering_like(c, out, true, false);
  else if (c.scenario == "blowup")
    run_scattering_like(c, out, false, true);
  else if (c.scenario == "resonance_audit")
    run_resonance_audit(c, out);
  else if (c.scenario == "energy_law")
    run_energy_law(c, out);
  else if (c.scenario == "time_fourier")
    run_time_fourier(c, out);
  else if (c.scenario == "binormal")
    run_binormal(c, out);
  out.finalize(c.scenario);
  return kExitOk;
}

int run_parsed(const json& raw, std::ostream& log, fs::path* run_dir_out) {
  ScenarioConfig config;
  try {
    config = parse_config(raw);
    if (config.scenario != "resonance_audit") sim_config_of(config).validate();
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << "\n";
    return kExitValidation;
  }

  fs::path root;
  if (!config.output_root.empty()) {
    root = config.output_root;
  } else if (const char* env = std::getenv("NLSLAB_OUTPUT_ROOT"); env && *env) {
    root = env;
  } else {
    root = "runs";
  }
  const auto stamp = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
  const fs::path dir = root / (config.scenario + "_" + std::to_string(config.seed) + "_" +
                               std::to_string(stamp));

  const std::string canonical = config.canonical.dump();
  RunDir out(dir, fnv1a64(canonical), config.seed);
  if (run_dir_out) *run_dir_out = dir;
  try {
    json echo = config.canonical;
    echo["config_hash"] = to_hex(out.config_hash());
    out.write("config_echo.json", echo.dump(2) + "\n");
    const int code = dispatch(config, out);
    log << "scenario " << config.scenario << " finished, outputs in " << dir.string() << "\n";
    return code;
  } catch (const NumericalAbort& e) {
    log << "numerical abort at tau = " << e.tau << ": " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    log << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace

int run_scenario(const fs::path& config_path, std::ostream& log) {
  json raw;
  try {
    std::ifstream is(config_path);
    if (!is) throw std::runtime_error("cannot open " + config_path.string());
    raw = json::parse(is);
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << "\n";
    return kExitValidation;
  }
  return run_parsed(raw, log, nullptr);
}

int run_scenario_text(const std::string& config_json, std::ostream& log,
                      fs::path* run_dir_out) {
  json raw;
  try {
    raw = json::parse(config_json);
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << "\n";
    return kExitValidation;
  }
  return run_parsed(raw, log, run_dir_out);
}

std::string summary_to_json(const ScatteringSummary& summary, std::uint64_t config_hash) {
  return summary_json(summary, config_hash).dump(2) + "\n";
}

std::string norm_report_to_json(const NormReport& report, std::uint64_t config_hash) {
  return norms_json(report, config_hash).dump(2) + "\n";
}

}  // namespace nlslab
