// Copyright 2026 The occam-icl Authors.
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


// occam-icl: run one experiment and write report.json plus CSV tables.
//
//   occam-icl <experiment> [--config file.json] [--seed N] [--trials N]
//             [--threads N] [--out-dir path] [--<param> value ...]
//
// Precedence: built-in defaults < config file < command-line flags.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "occam/harness/run.hpp"

namespace {

using namespace occam::harness;

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitRun = 1;

const char* type_label(ParamKind k) {
  switch (k) {
    case ParamKind::kInt: return "INT";
    case ParamKind::kDouble: return "NUM";
    case ParamKind::kString: return "TEXT";
    case ParamKind::kBool: return "BOOL";
    case ParamKind::kIntList: return "INT,...";
    case ParamKind::kDoubleList: return "NUM,...";
    case ParamKind::kStringList: return "TEXT,...";
    case ParamKind::kDoubleMatrix: return "JSON";
  }
  return "VALUE";
}

std::string flag_name(std::string param) {
  std::replace(param.begin(), param.end(), '_', '-');
  return "--" + param;
}

struct SubcommandArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t threads = 1;
  std::string out_dir;
  bool dry_run = false;
  std::map<std::string, std::string> params;  // raw flag text by param name
  CLI::Option* seed_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
  std::map<std::string, CLI::Option*> param_opts;
};

ExperimentConfig build_config(const Experiment& e, const SubcommandArgs& a) {
  ExperimentConfig c;
  if (!a.config_path.empty()) {
    c = load_config_file(a.config_path);
    if (!c.experiment.empty() && c.experiment != e.name) {
      throw ConfigError("experiment", "config file is for '" + c.experiment + "', not '" + e.name + "'");
    }
  }
  c.experiment = e.name;
  if (a.seed_opt->count()) c.seed = a.seed;
  if (a.trials_opt->count()) c.trials = a.trials;
  if (a.threads_opt->count()) c.threads = a.threads;
  for (const ParamSpec& spec : e.params) {
    if (a.param_opts.at(spec.name)->count()) c.params[spec.name] = parse_cli_value(spec, a.params.at(spec.name));
  }
  return c;
}

void print_tables(const Report& r, std::ostream& os) {
  for (const Table& t : r.tables) {
    if (t.size() > 40) continue;
    os << "\n[" << t.name() << "]\n" << to_csv(t);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian model-selection experiments for in-context learning"};
  app.set_version_flag("--version", std::string(kVersion));
  bool list = false;
  app.add_flag("--list", list, "list experiments and exit");
  app.require_subcommand(0, 1);

  std::map<std::string, SubcommandArgs> args;
  for (const Experiment& e : experiments()) {
    SubcommandArgs& a = args[e.name];
    CLI::App* sub = app.add_subcommand(e.name, e.summary);
    sub->add_option("--config", a.config_path, "JSON config file")->check(CLI::ExistingFile);
    a.seed_opt = sub->add_option("--seed", a.seed, "master seed (default 0)");
    a.trials_opt = sub->add_option("--trials", a.trials, e.trials_help + " (default " + std::to_string(e.default_trials) + ")");
    a.threads_opt = sub->add_option("--threads", a.threads, "worker threads, 0 = all cores (default 1)");
    sub->add_option("--out-dir", a.out_dir, "output directory (default results/" + e.name + ")");
    sub->add_flag("--dry-run", a.dry_run, "print the resolved config and exit");
    for (const ParamSpec& spec : e.params) {
      std::string def = spec.default_value.is_string() ? spec.default_value.get<std::string>() : spec.default_value.dump();
      if (def.size() > 60) def = def.substr(0, 57) + "...";
      a.param_opts[spec.name] = sub->add_option(flag_name(spec.name), a.params[spec.name], spec.help + " (default " + def + ")")
                                  ->type_name(type_label(spec.kind));
    }
  }

  CLI11_PARSE(app, argc, argv);

  if (list || app.get_subcommands().empty()) {
    for (const Experiment& e : experiments()) std::cout << e.name << "\t" << e.summary << "\n";
    return list ? 0 : kExitConfig;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const Experiment& e = find_experiment(sub->get_name());
  const SubcommandArgs& a = args.at(e.name);
  try {
    const ExperimentConfig config = build_config(e, a);
    if (a.dry_run) {
      std::cout << resolve(config).to_json().dump(2) << "\n";
      return 0;
    }
    const std::string out_dir = a.out_dir.empty() ? "results/" + e.name : a.out_dir;
    const Report r = run(config, out_dir);
    std::cout << e.name << ": wrote report.json";
    for (const Table& t : r.tables) std::cout << ", " << t.name() << ".csv";
    std::cout << " to " << out_dir << " (" << format_real(r.wall_clock_seconds) << " s)\n";
    print_tables(r, std::cout);
    return 0;
  } catch (const ConfigError& err) {
    std::cerr << "occam-icl: config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const IoError& err) {
    std::cerr << "occam-icl: I/O error: " << err.what() << "\n";
    return kExitIo;
  } catch (const std::exception& err) {
    std::cerr << "occam-icl: " << e.name << " failed: " << err.what() << "\n";
    return kExitRun;
  }
}
