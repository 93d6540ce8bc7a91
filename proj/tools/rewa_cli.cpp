/*
 * Copyright 2026 The rewa-sketch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// rewa: experiment runner. Exit status 0 on success, 1 when a run's checks fail,
// 2 on invalid input.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "rewa/errors.hpp"
#include "rewa/harness/config.hpp"
#include "rewa/harness/experiments.hpp"
#include "rewa/harness/report.hpp"

namespace {

using namespace rewa::harness;

constexpr int kExitFailed = 1;
constexpr int kExitInvalid = 2;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format = "json";
};

struct Output {
  std::string json;
  std::string csv;
  bool passed = true;
};

ExperimentConfig load_config(const Options& opt) {
  ExperimentConfig config;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw rewa::InvalidArgument("cannot open config file " + opt.config_path);
    apply_config(config, in);
  }
  if (opt.seed) config.seed = *opt.seed;
  if (!opt.out_dir.empty()) config.output = opt.out_dir;
  config.validate();
  return config;
}

template <class Report>
Output render(const std::string& name, const ExperimentConfig& config, const Report& report, bool passed) {
  return {envelope(name, config, to_json(report)).dump(2) + "\n", to_csv(report), passed};
}

Output run(const std::string& name, const ExperimentConfig& config) {
  if (name == "ranking") return render(name, config, run_ranking(config), true);
  if (name == "scaling") return render(name, config, run_scaling(config), true);
  if (name == "equivalence") {
    const auto r = run_equivalence(config);
    return render(name, config, r, r.passed);
  }
  if (name == "failure-modes") {
    const auto r = run_failure_modes(config);
    return render(name, config, r, r.passed);
  }
  if (name == "hybrid") {
    const auto r = run_hybrid(config);
    return render(name, config, r, r.passed);
  }
  const auto r = run_selftest(config);
  return render(name, config, r, r.passed);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"REWA similarity-sketch experiments"};
  app.require_subcommand(1);
  Options opt;
  const std::pair<const char*, const char*> commands[] = {
      {"ranking", "top-k recovery on a planted dataset over the n grid"},
      {"scaling", "minimal n across corpus sizes with a fit against ln N"},
      {"equivalence", "Bloom, MinHash, Count-Min and random-feature equivalence checks"},
      {"failure-modes", "order-dependent aggregator and vanishing-gap sweep"},
      {"hybrid", "two-channel product monoid decomposition and ranking"},
      {"selftest", "monoid laws, hash moments and serialization round trip"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "key = value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "run seed (overrides the config)");
    sub->add_option("--out", opt.out_dir, "directory receiving <command>.json and <command>.csv");
    sub->add_option("--format", opt.format, "report printed to stdout")->check(CLI::IsMember({"json", "csv"}));
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const ExperimentConfig config = load_config(opt);
    const Output out = run(name, config);
    if (!config.output.empty()) {
      const std::filesystem::path dir(config.output);
      std::filesystem::create_directories(dir);
      write_file(dir / (name + ".json"), out.json);
      write_file(dir / (name + ".csv"), out.csv);
    }
    std::cout << (opt.format == "csv" ? out.csv : out.json);
    if (!out.passed) {
      std::cerr << name << ": checks failed\n";
      return kExitFailed;
    }
    return 0;
  } catch (const rewa::InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const rewa::GenerationFailure& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const rewa::DomainTooLarge& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
}
