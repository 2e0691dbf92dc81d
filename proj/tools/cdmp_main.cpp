// Copyright 2026 The cdmp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cdmp command-line front end.
//
//   cdmp demo-gen --kind reach|handover_gt_pi [...]   synthetic demonstration
//   cdmp train --demo FILE [...]                      fit a model
//   cdmp run --preset setup1|setup2|setup3|custom     closed-loop trials
//   cdmp report LOG... [...]                          aggregate episode logs
//
// Exit codes: 0 success, 2 usage, 3 training, 4 runtime (DomainError).

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cdmp/cdmp.hpp"

namespace fs = std::filesystem;

namespace cdmp::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitTraining = 3;
constexpr int kExitRuntime = 4;

constexpr const char* kOutputDirEnv = "CDMP_OUTPUT_DIR";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --out-dir flag, then $CDMP_OUTPUT_DIR, then the config value, then ".".
fs::path output_dir(const std::string& flag, const std::string& from_config = {}) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  if (!from_config.empty()) return from_config;
  return ".";
}

fs::path resolve_output(const std::string& explicit_path, const fs::path& dir,
                        const std::string& default_name) {
  fs::path p = explicit_path.empty() ? dir / default_name : fs::path(explicit_path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

Vec3 to_vec3(const std::vector<double>& v) { return Vec3(v[0], v[1], v[2]); }

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i] + 1);
  }
  return s;
}

// demo-gen -------------------------------------------------------------------

struct DemoGenArgs {
  std::string kind;
  std::optional<double> duration;
  double rate = 250.0;
  std::optional<double> angle;
  std::vector<double> axis, start, goal, start_quat;
  std::string out;
  std::string out_dir;
};

int cmd_demo_gen(const DemoGenArgs& a) {
  DemoKind kind;
  if (a.kind == "reach") {
    kind = DemoKind::kReach;
  } else if (a.kind == "handover_gt_pi") {
    kind = DemoKind::kHandoverGtPi;
  } else {
    throw UsageError("--kind must be reach or handover_gt_pi");
  }
  SynthOptions o = SynthOptions::defaults(kind);
  o.rate_hz = a.rate;
  if (a.duration) o.duration = *a.duration;
  if (a.angle) o.angle = *a.angle;
  if (!a.axis.empty()) o.axis = to_vec3(a.axis);
  if (!a.start.empty()) o.start_position = to_vec3(a.start);
  if (!a.goal.empty()) o.goal_position = to_vec3(a.goal);
  if (!a.start_quat.empty()) {
    o.start_orientation =
        Quaternion(a.start_quat[0], a.start_quat[1], a.start_quat[2], a.start_quat[3]);
  }
  Demonstration demo = [&] {
    try {
      return synth_demo(o);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  const fs::path path =
      resolve_output(a.out, output_dir(a.out_dir), "demo_" + a.kind + ".csv");
  save_demo(path.string(), demo);
  std::cout << "wrote " << path.string() << " (" << demo.size() << " samples, "
            << "start-goal rotation "
            << quat_diff(demo.q().front(), demo.q().back()).norm() << " rad)\n";
  return kExitOk;
}

// train ----------------------------------------------------------------------

struct TrainArgs {
  std::string demo;
  int n_basis = 25;
  double alpha_z = 25.0;
  double alpha_x = 1.0;
  double lowpass_hz = 0.0;
  std::string out;
  std::string out_dir;
};

int cmd_train(const TrainArgs& a) {
  if (!fs::exists(a.demo)) throw UsageError("demo file not found: " + a.demo);
  if (a.n_basis < 1) throw UsageError("--basis must be >= 1");

  DmpParameters p;
  p.n_basis = a.n_basis;
  p.alpha_z = a.alpha_z;
  p.alpha_x = a.alpha_x;
  DifferentiateOptions opt;
  opt.lowpass_cutoff_hz = a.lowpass_hz;

  std::optional<Demonstration> demo;
  std::optional<TrainResult> result;
  demo = load_demo(a.demo);
  try {
    result = train(*demo, p, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: cannot train on " << a.demo << ": " << e.what() << '\n';
    return kExitTraining;
  }
  const DmpModel& m = result->fit.model;
  const fs::path path = resolve_output(a.out, output_dir(a.out_dir), "model.txt");
  save_model(path.string(), m);

  if (demo->resigned() > 0) {
    std::cerr << "warning: " << demo->resigned()
              << " quaternion samples were sign-flipped for continuity\n";
  }
  if (result->non_uniform_sampling) {
    std::cerr << "warning: non-uniform sampling (interval deviates > 10%)\n";
  }
  for (const auto& [i, j] : result->fit.ill_conditioned) {
    std::cerr << "warning: ill-conditioned basis " << j + 1 << " in dimension "
              << i + 1 << "; weight set to 0\n";
  }
  const auto& skipped = result->fit.skipped_dimensions;
  if (!skipped.empty()) {
    std::cerr << "warning: degenerate scaling, skipped dimensions " << join(skipped)
              << " (weights 0)\n";
  }

  const ReproductionError err = reproduction_error(m, *demo);
  std::cout << "wrote " << path.string() << "\n"
            << "tau = " << m.tau() << " s, n_basis = " << m.n_basis() << "\n"
            << "forcing residual rms per dimension:";
  for (int i = 0; i < kPoseDims; ++i) std::cout << ' ' << result->residual[i];
  std::cout << "\nforcing residual rms total: " << result->residual.norm() << "\n"
            << "rollout rms position error: " << err.rms_position << " m\n"
            << "rollout rms orientation error: " << err.rms_orientation << " rad\n";

  if (static_cast<int>(skipped.size()) == kPoseDims) {
    std::cerr << "error: degenerate demonstration, every dimension skipped\n";
    return kExitTraining;
  }
  return kExitOk;
}

// run ------------------------------------------------------------------------

struct RunArgs {
  std::string preset;
  std::string config;
  std::string model;
  std::string out_dir;
  int trials = 0;
  int jobs = 1;
  long long seed = -1;
  double horizon = 0;
  double dt = 0;
  double k_v = 0, k_c = 0, alpha_e = 0;
  bool no_perturb = false;
  bool quiet = false;
};

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw UsageError("expected a boolean, got '" + s + "'");
}

/// Applies config-file keys on top of the preset defaults.
void apply_config(const KeyValueFile& kv, ExperimentConfig& c, std::string& model,
                  std::string& out_dir, int& jobs) {
  c.dt = kv.number_or("dt", c.dt);
  c.horizon = kv.number_or("horizon", c.horizon);
  if (kv.has("trials")) c.trials = static_cast<int>(kv.number("trials"));
  if (kv.has("seed")) c.seed = static_cast<std::uint64_t>(kv.number("seed"));
  if (kv.has("jobs")) jobs = static_cast<int>(kv.number("jobs"));
  if (kv.has("perturb")) c.perturb = parse_bool(kv.get("perturb"));
  c.k_v = kv.number_or("k_v", c.k_v);
  c.k_v_orientation = kv.number_or("k_v_orientation", c.k_v);
  c.alpha_e = kv.number_or("alpha_e", c.alpha_e);
  c.k_c = kv.number_or("k_c", c.k_c);
  c.displacement = kv.number_or("displacement", c.displacement);
  c.rotation = kv.number_or("rotation", c.rotation);
  c.settle_periods = kv.number_or("settle_periods", c.settle_periods);
  c.pulse_duration = kv.number_or("pulse_duration", c.pulse_duration);
  c.pulse_linear = kv.number_or("pulse_linear", c.pulse_linear);
  c.pulse_angular = kv.number_or("pulse_angular", c.pulse_angular);
  if (kv.has("pulse_starts")) c.pulse_starts = parse_numbers(kv.get("pulse_starts"));
  for (const auto& v : kv.get_all("displace")) {
    const auto n = parse_numbers(v);
    if (n.size() != 7) throw FormatError("displace expects: t dy1 dy2 dy3 r1 r2 r3");
    c.schedule.push_back(Perturbation::displace_release(
        n[0], Vec3(n[1], n[2], n[3]), Vec3(n[4], n[5], n[6])));
  }
  for (const auto& v : kv.get_all("pulse")) {
    const auto n = parse_numbers(v);
    if (n.size() != 8) throw FormatError("pulse expects: t_start t_end a1 .. a6");
    Vec6 a;
    a << n[2], n[3], n[4], n[5], n[6], n[7];
    c.schedule.push_back(Perturbation::accel_pulse(n[0], n[1], a));
  }
  if (kv.has("model")) model = kv.get("model");
  if (kv.has("output_dir")) out_dir = kv.get("output_dir");
}

void write_summary(std::ostream& out, const std::string& preset, const DmpModel& m,
                   const ExperimentConfig& c, const std::vector<TrialSummary>& s) {
  int n_conv = 0, n_abort = 0;
  bool all_cross = !s.empty(), all_gt_pi = !s.empty();
  double max_ratio = 0, worst_slope = -1e300, min_r2 = 1;
  for (const auto& t : s) {
    n_conv += t.converged;
    n_abort += t.aborted;
    all_cross = all_cross && t.equator_crossed && t.min_successive_dot > 0;
    all_gt_pi = all_gt_pi && t.initial_dcg > std::numbers::pi;
    max_ratio = std::max(max_ratio, t.max_tau_ratio);
    worst_slope = std::max(worst_slope, t.decay.slope);
    min_r2 = std::min(min_r2, t.decay.r_squared);
  }
  out << "preset = " << preset << "\n"
      << "tau = " << format_double(m.tau()) << "\n"
      << "horizon = " << format_double(c.horizon) << "\n"
      << "dt = " << format_double(c.dt) << "\n"
      << "trials = " << s.size() << "\n"
      << "converged = " << n_conv << "/" << s.size() << "\n"
      << "aborted = " << n_abort << "\n"
      << "max_tau_ratio = " << max_ratio << "\n"
      << "worst_decay_slope = " << worst_slope << "\n"
      << "min_decay_r2 = " << min_r2 << "\n"
      << "initial_dcg_gt_pi = " << (all_gt_pi ? "true" : "false") << "\n"
      << "equator_crossed = " << (all_cross ? "true" : "false") << "\n"
      << "# trial converged aborted t_conv final_max_norm decay_slope decay_r2 "
         "max_tau_ratio initial_dcg final_dcg equator_crossed min_dot\n";
  for (const auto& t : s) {
    out << t.trial << ' ' << t.converged << ' ' << t.aborted << ' '
        << t.convergence_time << ' ' << t.final_max_norm << ' ' << t.decay.slope
        << ' ' << t.decay.r_squared << ' ' << t.max_tau_ratio << ' ' << t.initial_dcg
        << ' ' << t.final_dcg << ' ' << t.equator_crossed << ' '
        << t.min_successive_dot << '\n';
    if (t.aborted) out << "#   trial " << t.trial << " aborted: " << t.error << '\n';
  }
}

int cmd_run(const RunArgs& a) {
  KeyValueFile kv;
  if (!a.config.empty()) {
    if (!fs::exists(a.config)) throw UsageError("config file not found: " + a.config);
    kv = KeyValueFile::load(a.config);
  }
  std::string preset_str = a.preset;
  if (preset_str.empty()) preset_str = kv.has("preset") ? kv.get("preset") : "setup1";
  const auto preset = parse_preset(preset_str);
  if (!preset) throw UsageError("unknown preset '" + preset_str + "'");

  ExperimentConfig c = ExperimentConfig::defaults(*preset);
  std::string model_path, cfg_out;
  int jobs = a.jobs;
  apply_config(kv, c, model_path, cfg_out, jobs);
  if (!a.model.empty()) model_path = a.model;
  if (a.trials > 0) c.trials = a.trials;
  if (a.seed >= 0) c.seed = static_cast<std::uint64_t>(a.seed);
  if (a.horizon > 0) c.horizon = a.horizon;
  if (a.dt > 0) c.dt = a.dt;
  if (a.k_v > 0) c.k_v = c.k_v_orientation = a.k_v;
  if (a.k_c > 0) c.k_c = a.k_c;
  if (a.alpha_e > 0) c.alpha_e = a.alpha_e;
  if (a.no_perturb) c.perturb = false;
  if (!(c.dt > 0) || !(c.horizon > 0) || c.trials < 1) {
    throw UsageError("dt, horizon and trials must be positive");
  }
  if (*preset == Preset::kCustom && model_path.empty()) {
    throw UsageError("preset custom needs a model (--model or 'model' key)");
  }

  std::optional<DmpModel> model;
  if (!model_path.empty()) {
    if (!fs::exists(model_path)) throw UsageError("model file not found: " + model_path);
    model = load_model(model_path);
  } else {
    model = preset_model(*preset);
  }

  const fs::path dir = output_dir(a.out_dir, cfg_out);
  fs::create_directories(dir);
  std::mutex io_mutex;
  const auto started = std::chrono::steady_clock::now();
  const auto summaries = run_batch(*model, c, jobs, [&](const TrialResult& r) {
    const fs::path p =
        dir / (preset_str + "_trial_" + std::to_string(r.summary.trial) + ".csv");
    std::ofstream out(p);
    write_episode_csv(out, r.log);
    if (!out) {
      std::lock_guard lock(io_mutex);
      std::cerr << "error: cannot write " << p.string() << '\n';
    }
  });
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  std::ostringstream text;
  write_summary(text, preset_str, *model, c, summaries);
  std::ofstream(dir / (preset_str + "_summary.txt")) << text.str();
  if (a.quiet) {
    std::istringstream in(text.str());
    std::string line;
    while (std::getline(in, line) && line.rfind("# trial", 0) != 0) {
      std::cout << line << '\n';
    }
  } else {
    std::cout << text.str();
  }
  std::cerr << "ran " << summaries.size() << " trials in " << seconds << " s\n";

  for (const auto& s : summaries) {
    if (s.aborted) return kExitRuntime;
  }
  return kExitOk;
}

// report ---------------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string out_dir;
  double threshold = 1e-3;
  int stride = 1;
};

struct ReportRow {
  std::string file;
  bool converged;
  double final_max_norm;
  double final_x;
  double max_tau_a;
  double peak_xi;
  DecayFit decay;
  double duration;
};

ReportRow analyze(const std::string& file, const std::vector<EpisodeNormRow>& rows,
                  double threshold) {
  ReportRow r{};
  r.file = file;
  if (rows.empty()) return r;
  const auto& last = rows.back();
  r.final_max_norm = *std::max_element(last.norms.begin(), last.norms.end());
  r.final_x = last.x;
  r.converged = r.final_max_norm < threshold && std::abs(last.x) < threshold;
  std::size_t peak = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    r.max_tau_a = std::max(r.max_tau_a, rows[k].tau_a);
    if (rows[k].xi_norm() > rows[peak].xi_norm()) peak = k;
  }
  r.peak_xi = rows[peak].xi_norm();
  r.duration = last.t - rows.front().t;
  std::vector<double> ts, ns;
  for (std::size_t k = peak; k < rows.size(); ++k) {
    ts.push_back(rows[k].t);
    ns.push_back(rows[k].xi_norm());
  }
  r.decay = fit_log_decay(ts, ns);
  return r;
}

int cmd_report(const ReportArgs& a) {
  std::vector<fs::path> files;
  for (const auto& in : a.inputs) {
    if (fs::is_directory(in)) {
      for (const auto& e : fs::directory_iterator(in)) {
        const auto name = e.path().filename().string();
        if (e.is_regular_file() && name.find("_trial_") != std::string::npos &&
            e.path().extension() == ".csv") {
          files.push_back(e.path());
        }
      }
    } else if (fs::exists(in)) {
      files.push_back(in);
    } else {
      throw UsageError("input not found: " + in);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no episode logs given");
  if (a.stride < 1) throw UsageError("--stride must be >= 1");

  const fs::path dir = output_dir(a.out_dir);
  fs::create_directories(dir);
  std::ofstream table(dir / "report_trials.csv");
  std::ofstream longf(dir / "report_long.csv");
  table << "file,converged,final_max_norm,final_x,max_tau_a,peak_xi,decay_slope,"
           "decay_r2,duration\n";
  longf << "file,t,state,value\n";
  static constexpr const char* kNormNames[9] = {"n_ypos", "n_yvel", "n_dac",
                                                "n_womega", "n_e", "n_ycg",
                                                "n_z", "n_dcg", "n_wz"};
  std::vector<ReportRow> rows;
  for (const auto& f : files) {
    std::ifstream in(f);
    const auto data = read_episode_csv(in);
    const std::string name = f.filename().string();
    rows.push_back(analyze(name, data, a.threshold));
    const auto& r = rows.back();
    table << r.file << ',' << (r.converged ? "true" : "false") << ','
          << format_double(r.final_max_norm) << ',' << format_double(r.final_x) << ','
          << format_double(r.max_tau_a) << ',' << format_double(r.peak_xi) << ','
          << format_double(r.decay.slope) << ',' << format_double(r.decay.r_squared)
          << ',' << format_double(r.duration) << '\n';
    for (std::size_t k = 0; k < data.size(); k += static_cast<std::size_t>(a.stride)) {
      const auto& d = data[k];
      const std::string prefix = name + ',' + format_double(d.t) + ',';
      longf << prefix << "x," << format_double(d.x) << '\n';
      longf << prefix << "tau_a," << format_double(d.tau_a) << '\n';
      for (int i = 0; i < 9; ++i) {
        longf << prefix << kNormNames[i] << ',' << format_double(d.norms[i]) << '\n';
      }
    }
  }

  const double n = static_cast<double>(rows.size());
  int n_conv = 0;
  double mean_final = 0, mean_tau = 0, mean_slope = 0;
  for (const auto& r : rows) {
    n_conv += r.converged;
    mean_final += r.final_max_norm / n;
    mean_tau += r.max_tau_a / n;
    mean_slope += r.decay.slope / n;
  }
  table << "# aggregate: trials=" << rows.size() << " converged=" << n_conv
        << " failed=" << rows.size() - static_cast<std::size_t>(n_conv)
        << " mean_final_max_norm=" << format_double(mean_final)
        << " mean_max_tau_a=" << format_double(mean_tau)
        << " mean_decay_slope=" << format_double(mean_slope) << '\n';

  std::cout << "file converged final_max_norm max_tau_a decay_slope decay_r2\n";
  for (const auto& r : rows) {
    std::cout << r.file << ' ' << (r.converged ? "true" : "false") << ' '
              << r.final_max_norm << ' ' << r.max_tau_a << ' ' << r.decay.slope << ' '
              << r.decay.r_squared << '\n';
  }
  std::cout << "trials = " << rows.size() << "\n"
            << "converged = " << n_conv << "\n"
            << "failed = " << rows.size() - static_cast<std::size_t>(n_conv) << "\n"
            << "mean_final_max_norm = " << mean_final << "\n"
            << "mean_max_tau_a = " << mean_tau << "\n"
            << "wrote " << (dir / "report_trials.csv").string() << " and "
            << (dir / "report_long.csv").string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporally coupled Cartesian DMPs: demos, training, simulation"};
  app.require_subcommand(1);

  DemoGenArgs dg;
  auto* demo_gen = app.add_subcommand("demo-gen", "Generate a synthetic demonstration");
  demo_gen->add_option("--kind", dg.kind, "reach | handover_gt_pi")->required();
  demo_gen->add_option("--duration", dg.duration, "Duration in seconds");
  demo_gen->add_option("--rate", dg.rate, "Sampling rate in Hz")->capture_default_str();
  demo_gen->add_option("--angle", dg.angle, "Total rotation angle in rad");
  demo_gen->add_option("--axis", dg.axis, "Rotation axis x y z")->expected(3);
  demo_gen->add_option("--start", dg.start, "Start position x y z")->expected(3);
  demo_gen->add_option("--goal", dg.goal, "Goal position x y z")->expected(3);
  demo_gen->add_option("--start-quat", dg.start_quat, "Start orientation w x y z")
      ->expected(4);
  demo_gen->add_option("--out", dg.out, "Output CSV path");
  demo_gen->add_option("--out-dir", dg.out_dir, "Output directory");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Fit a DMP model to a demonstration");
  train_cmd->add_option("--demo", tr.demo, "Demonstration CSV")->required();
  train_cmd->add_option("--basis", tr.n_basis, "Basis functions per dimension")
      ->capture_default_str();
  train_cmd->add_option("--alpha-z", tr.alpha_z)->capture_default_str();
  train_cmd->add_option("--alpha-x", tr.alpha_x)->capture_default_str();
  train_cmd->add_option("--lowpass-hz", tr.lowpass_hz,
                        "Low-pass cutoff for derivative estimates (0 = off)");
  train_cmd->add_option("--out", tr.out, "Output model path");
  train_cmd->add_option("--out-dir", tr.out_dir, "Output directory");

  RunArgs ru;
  auto* run = app.add_subcommand("run", "Run closed-loop perturbation trials");
  run->add_option("--preset", ru.preset, "setup1 | setup2 | setup3 | custom");
  run->add_option("--config", ru.config, "Key-value run configuration");
  run->add_option("--model", ru.model, "Model file (default: preset's own model)");
  run->add_option("--trials", ru.trials);
  run->add_option("--jobs", ru.jobs, "Concurrent trials")->capture_default_str();
  run->add_option("--seed", ru.seed);
  run->add_option("--horizon", ru.horizon, "Episode length in seconds");
  run->add_option("--dt", ru.dt, "Control period in seconds");
  run->add_option("--k-v", ru.k_v);
  run->add_option("--k-c", ru.k_c);
  run->add_option("--alpha-e", ru.alpha_e);
  run->add_flag("--no-perturb", ru.no_perturb, "Disable perturbations");
  run->add_flag("--quiet", ru.quiet, "Print only the aggregate summary");
  run->add_option("--out-dir", ru.out_dir, "Output directory");

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "Aggregate episode logs");
  report->add_option("inputs", rp.inputs, "Episode CSV files or directories");
  report->add_option("--out-dir", rp.out_dir, "Output directory");
  report->add_option("--threshold", rp.threshold, "Convergence threshold")
      ->capture_default_str();
  report->add_option("--stride", rp.stride, "Row stride of the long-format CSV")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*demo_gen) return cmd_demo_gen(dg);
    if (*train_cmd) return cmd_train(tr);
    if (*run) return cmd_run(ru);
    if (*report) return cmd_report(rp);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace cdmp::cli

int main(int argc, char** argv) { return cdmp::cli::main(argc, argv); }
