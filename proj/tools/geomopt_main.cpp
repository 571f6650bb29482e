// geomopt command-line tool.
//
//   geomopt <hoffman_scaling|trajectory|svm|solve|constants> [--config FILE] [--key value ...]
//
// Exit codes: 0 success, 2 configuration or input error, 3 numerical failure,
// 4 no trial identified its support (hoffman_scaling).

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geomopt/errors.hpp"
#include "geomopt/experiments.hpp"
#include "geomopt/linalg.hpp"

namespace {

using namespace geomopt;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitUnidentified = 4;

std::optional<std::string> timestamp_comment(const Config& cfg) {
  if (!cfg.get_bool("experiment.timestamp", false)) return std::nullopt;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return std::string("generated ") + buf;
}

void write_table(const CsvTable& table, const std::string& path, const Config& cfg) {
  table.write(path, timestamp_comment(cfg));
  std::cout << "wrote " << path << " (" << table.size() << " rows)\n";
}

std::string sibling(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + ".csv")).string();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

int cmd_hoffman_scaling(const Config& cfg) {
  const auto hc = hoffman_scaling_config_from(cfg);
  const auto rows = run_hoffman_scaling(hc);
  write_table(hoffman_scaling_table(rows), cfg.get_string("experiment.out", "hoffman_scaling.csv"), cfg);

  std::map<std::pair<std::size_t, std::string>, std::vector<double>> groups;
  for (const auto& r : rows) groups[{r.dim, r.ensemble}].push_back(r.h_support_closed);
  for (const auto& [key, values] : groups)
    std::cout << fmt::format("d={:<5} {:<10} median H_support={:.6g}\n", key.first, key.second, median(values));
  const auto identified = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.identified; });
  std::cout << fmt::format("identified {}/{} trials\n", identified, rows.size());
  return identified == 0 ? kExitUnidentified : 0;
}

void report_trajectory(const TrajectoryResult& r) {
  std::cout << fmt::format("iterations {}  final gap {:.3e}  support size {}\n", r.run.records.back().k,
                           std::max(0.0, r.run.final_objective() - r.f_star), r.support.size());
  if (r.identification)
    std::cout << "identification time " << *r.identification << "\n";
  else
    std::cout << "support not identified\n";
  if (!r.cone.records.empty()) std::cout << "cone lemma violations " << r.cone.violations() << "\n";
}

int cmd_trajectory(const Config& cfg) {
  const std::string out = cfg.get_string("experiment.out", "trajectory.csv");
  if (cfg.has("problem.a")) {
    const auto p = problem_from(cfg);
    if (!is_l1(p)) throw ConfigError("trajectory needs an l1 problem", "problem.reg_kind");
    const auto solver = solver_config_from(cfg, TrajectoryConfig{}.solver);
    const auto r = run_trajectory(p, solver, start_point_from(cfg, p));
    write_table(r.table, out, cfg);
    report_trajectory(r);
    return 0;
  }
  const auto st = run_synthetic_trajectory(trajectory_config_from(cfg));
  write_table(st.result.table, out, cfg);
  std::cout << fmt::format("eta {:.6g}\n", st.instance.eta);
  report_trajectory(st.result);
  return 0;
}

int cmd_svm(const Config& cfg) {
  const auto sc = svm_config_from(cfg);
  CompositeProblem dual;
  if (cfg.has("problem.features")) {
    dual = problem_from(cfg);
  } else {
    const auto blobs = make_blobs(sc.n, sc.separation, sc.seed);
    dual = make_svm_dual(blobs.features, blobs.labels, sc.c_cap);
  }
  const auto r = run_svm(dual, sc.solver);
  const std::string out = cfg.get_string("experiment.out", "svm_trajectory.csv");
  write_table(r.trajectory.table, out, cfg);
  write_table(constants_table({r.global, r.restricted}), cfg.get_string("experiment.constants_out", sibling(out, "_constants")),
              cfg);
  std::cout << fmt::format("support vectors {}  kappa {:.6g}  kappa_K {:.6g}\n", r.support_vectors.size(),
                           r.global.kappa, r.restricted.kappa_K);
  return 0;
}

int cmd_solve(const Config& cfg) {
  const auto p = problem_from(cfg);
  const auto solver = solver_config_from(cfg, SolverConfig{});
  const auto r = run_trajectory(p, solver, start_point_from(cfg, p));
  write_table(r.table, cfg.get_string("experiment.out", "solve_trajectory.csv"), cfg);
  const Vector& x = r.run.final_x();
  std::string solution;
  for (double v : x) solution += format_real(v) + "\n";
  std::cout << "solution\n" << solution;
  if (cfg.has("experiment.solution_out")) {
    CsvTable t({"index", "value"});
    for (std::size_t i = 0; i < x.size(); ++i) t.add_row({std::uint64_t{i}, x[i]});
    write_table(t, cfg.get_string("experiment.solution_out", ""), cfg);
  }
  return 0;
}

int cmd_constants(const Config& cfg) {
  const auto p = problem_from(cfg);
  const auto solver = solver_config_from(cfg, SolverConfig{});
  const auto x0 = start_point_from(cfg, p);
  const auto reference = reference_solve(p, solver, x0);
  const std::string which = cfg.get_string("experiment.restriction", "both");
  if (which != "global" && which != "support" && which != "both")
    throw ConfigError("restriction must be global, support or both", "experiment.restriction");

  ConstantsOptions opt;
  opt.seed = cfg.get_uint("experiment.seed", 0);
  opt.pl_samples = cfg.get_uint("experiment.samples", opt.pl_samples);
  std::vector<ConstantsReport> reports;
  if (which != "support") reports.push_back(constants_report(p, GlobalRegion{}, reference, opt));
  if (which != "global") {
    const IndexSet support = active_set(reference.final_x(), kSupportVectorTol);
    if (support.empty()) throw DegenerateError("reference solution has an empty support");
    reports.push_back(constants_report(p, SupportFace{support}, reference, opt));
  }
  write_table(constants_table(reports), cfg.get_string("experiment.out", "constants.csv"), cfg);
  for (const auto& r : reports)
    std::cout << fmt::format("{:<13} kappa {:.6g}  kappa_K {:.6g}  nu_K {:.6g} ({})\n", r.restriction, r.kappa,
                             r.kappa_K, r.nu_K, r.nu_provenance);
  return 0;
}

// Turns "--key value" and "--key=value" pairs into config overrides.
void apply_overrides(Config& cfg, const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) throw ConfigError("unexpected argument '" + a + "'", a);
    std::string key = a.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= args.size()) throw ConfigError("missing value for '--" + key + "'", key);
      value = args[++i];
    }
    cfg.set_override(key, value);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory-restricted geometry of proximal gradient methods"};
  app.require_subcommand(1);
  std::string config_path;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"hoffman_scaling", "Support-restricted Hoffman constants across dimensions and ensembles"},
      {"trajectory", "Instrumented ISTA run with cone and identification diagnostics"},
      {"svm", "Dual SVM by projected gradient with support-vector constants"},
      {"solve", "Run the proximal gradient method on a configured problem"},
      {"constants", "Global and support-restricted geometric constants"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "TOML configuration file");
    sub->allow_extras();
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    CLI::App* sub = *std::find_if(subs.begin(), subs.end(), [](CLI::App* s) { return s->parsed(); });
    Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
    apply_overrides(cfg, sub->remaining());
    const std::string name = sub->get_name();
    if (name == "hoffman_scaling") return cmd_hoffman_scaling(cfg);
    if (name == "trajectory") return cmd_trajectory(cfg);
    if (name == "svm") return cmd_svm(cfg);
    if (name == "solve") return cmd_solve(cfg);
    return cmd_constants(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << e.key() << "]: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
