// qhmix: run the shock-tube benchmarks and mesh-convergence studies.

#include <omp.h>

#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qhmix/cases.hpp"
#include "qhmix/csv.hpp"
#include "qhmix/study.hpp"

namespace fs = std::filesystem;
using namespace qhmix;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;

// Flags that double as config keys; unset flags leave the case untouched.
struct Overrides {
  std::map<std::string, std::string> values;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    app->add_option("--" + key, values[key], help);
  }
};

void add_case_flags(CLI::App* app, std::string& case_id, std::string& config, Overrides& o) {
  app->add_option("--case", case_id, "Benchmark id, A to G");
  app->add_option("--config", config, "key=value file; flags override it");
  o.add(app, "n", "Number of cells");
  o.add(app, "reg", "Regularization: qgd or qhd");
  o.add(app, "a", "Relaxation-time factor a");
  o.add(app, "beta", "Courant parameter");
  o.add(app, "schmidt", "Schmidt number");
  o.add(app, "prandtl-inv", "Reported inverse Prandtl value; kappa uses its reciprocal");
  o.add(app, "t-fin", "Final time, s");
  o.add(app, "boundary", "copy or periodic");
  o.add(app, "partials", "nonnegative (default) or signed: whether a partial density may undershoot zero");
}

struct Request {
  CaseSpec spec;
  std::map<std::string, std::string> run_keys;
};

Request resolve(const std::string& case_id, const std::string& config, const Overrides& o,
                const std::vector<std::string>& run_flag_keys,
                const std::map<std::string, std::string>& run_flags) {
  Request r;
  if (!config.empty()) {
    CaseConfig c = read_case_config(config);
    r.spec = c.spec;
    r.run_keys = c.run_keys;
    if (!case_id.empty()) {
      throw Error(ErrorCode::ConfigError, "--case and --config are exclusive; put a case key in the config");
    }
  } else if (!case_id.empty()) {
    r.spec = make_case(case_id);
  } else {
    throw Error(ErrorCode::ConfigError, "one of --case or --config is required");
  }
  for (const auto& [key, value] : o.values) {
    if (!value.empty()) set_case_key(r.spec, key, value);
  }
  for (const std::string& key : run_flag_keys) {
    const auto it = run_flags.find(key);
    if (it != run_flags.end() && !it->second.empty()) r.run_keys[key] = it->second;
  }
  r.spec.validate();
  return r;
}

std::string run_key(const Request& r, const std::string& key, const std::string& fallback) {
  const auto it = r.run_keys.find(key);
  return it == r.run_keys.end() ? fallback : it->second;
}

void set_threads(const Request& r) {
  const int threads = parse_int("threads", run_key(r, "threads", "1"));
  if (threads < 1) throw Error(ErrorCode::ConfigError, "threads must be positive");
  omp_set_num_threads(threads);
}

std::string state_csv(const MeshState& s) {
  std::ostringstream os;
  write_state_csv(os, s);
  return os.str();
}

std::string diagnostics_csv(const std::vector<StepDiagnostics>& h) {
  std::ostringstream os;
  write_diagnostics_csv(os, h);
  return os.str();
}

int cmd_run(const Request& r) {
  set_threads(r);
  const fs::path out = run_key(r, "out", ".");
  fs::create_directories(out);
  const int stride = parse_int("stride", run_key(r, "stride", "1"));
  if (stride < 1) throw Error(ErrorCode::ConfigError, "stride must be positive");

  const SchemeConfig cfg = r.spec.scheme_config();
  const Mesh mesh = case_mesh(r.spec);
  write_file((out / "case.cfg").string(), format_case_config(r.spec));

  RunOptions opts;
  opts.stride = stride;
  try {
    const RunResult res = run(build_initial(r.spec, mesh), cfg, r.spec.t_fin, opts);
    write_file((out / "final.csv").string(), state_csv(res.final));
    write_file((out / "diagnostics.csv").string(), diagnostics_csv(res.history));
    std::cout << "case " << r.spec.id << ": " << res.steps << " steps to t = "
              << format_double(res.final.time) << " on " << mesh.n_cells() << " cells ("
              << to_string(cfg.reg) << ")\n";
    return 0;
  } catch (const RunError& e) {
    std::ostringstream rec;
    rec << "code = " << to_string(e.code()) << '\n'
        << "cause = " << to_string(e.cause()) << '\n'
        << "node = " << e.node() << '\n'
        << "time = " << format_double(e.time()) << '\n'
        << "message = " << e.what() << '\n';
    write_file((out / "failure.txt").string(), rec.str());
    write_file((out / "last_valid.csv").string(), state_csv(e.last_valid()));
    write_file((out / "diagnostics.csv").string(), diagnostics_csv(e.history()));
    std::cerr << "run failed: " << e.what() << '\n';
    return kExitSolver;
  }
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int(key, item));
  if (out.empty()) throw Error(ErrorCode::ConfigError, key + " is empty");
  return out;
}

int cmd_error_study(const Request& r) {
  set_threads(r);
  const std::vector<int> n_list = parse_int_list("n-list", run_key(r, "n-list", "250,500,1000"));
  const int n_ref = parse_int("n-ref", run_key(r, "n-ref", "8000"));
  const ErrorReport report = error_study(r.spec, r.spec.scheme_config(), n_list, n_ref);
  std::cout << format_report_table(report);
  const auto out_it = r.run_keys.find("out");
  if (out_it != r.run_keys.end()) {
    fs::create_directories(out_it->second);
    write_file((fs::path(out_it->second) / "errors.csv").string(), format_report_csv(report));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binary stiffened-gas mixture shock tubes with QGD/QHD schemes"};
  app.require_subcommand(1);

  std::string run_case, run_config;
  Overrides run_over;
  std::map<std::string, std::string> run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one case to its final time");
  add_case_flags(run_cmd, run_case, run_config, run_over);
  run_cmd->add_option("--out", run_flags["out"], "Output directory");
  run_cmd->add_option("--stride", run_flags["stride"], "Diagnostics every k steps");
  run_cmd->add_option("--threads", run_flags["threads"], "OpenMP threads (default 1)");

  std::string study_case, study_config;
  Overrides study_over;
  std::map<std::string, std::string> study_flags;
  CLI::App* study_cmd =
      app.add_subcommand("error-study", "L1 errors and orders against a fine-mesh solution");
  add_case_flags(study_cmd, study_case, study_config, study_over);
  study_cmd->add_option("--n-list", study_flags["n-list"], "Comma-separated N (default 250,500,1000)");
  study_cmd->add_option("--n-ref", study_flags["n-ref"], "Reference N (default 8000)");
  study_cmd->add_option("--out", study_flags["out"], "Directory for errors.csv");
  study_cmd->add_option("--threads", study_flags["threads"], "OpenMP threads (default 1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return cmd_run(resolve(run_case, run_config, run_over, {"out", "stride", "threads"},
                             run_flags));
    }
    return cmd_error_study(resolve(study_case, study_config, study_over,
                                   {"n-list", "n-ref", "out", "threads"}, study_flags));
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
