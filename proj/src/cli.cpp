#include <ttinherit/cli.hpp>

#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <ttinherit/errors.hpp>
#include <ttinherit/experiment.hpp>
#include <ttinherit/outputs.hpp>
#include <ttinherit/serialize.hpp>

namespace ttinherit {

namespace {

struct CommonOptions {
  std::string config_path;
  std::string scale;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Experiment configuration (JSON)");
  cmd->add_option("--scale", opts.scale, "Preset overriding shape, ranks, trials and generators")
      ->check(CLI::IsMember({"desk", "paper"}));
  cmd->add_option("--seed", opts.seed, "Master seed override");
  cmd->add_option("--trials", opts.trials, "Trial count override (>= 1)");
}

ExperimentConfig build_config(const CommonOptions& opts) {
  if (opts.config_path.empty() && opts.scale.empty()) {
    throw ConfigError("either --config or --scale is required");
  }
  ExperimentConfig config = opts.config_path.empty() ? desk_preset() : load_config(opts.config_path);
  if (!opts.scale.empty()) {
    apply_scale(config, opts.scale);
  }
  if (opts.seed) {
    config.master_seed = *opts.seed;
  }
  if (opts.trials) {
    if (*opts.trials < 1) {
      throw ConfigError("--trials must be at least 1");
    }
    config.trials = static_cast<std::size_t>(*opts.trials);
  }
  validate(config);
  return config;
}

void print_summary(const ExperimentResult& result, std::ostream& out) {
  out << "trials: " << result.trials.size() << " (" << result.failed_trials << " failed)\n";
  out << "bound violations: " << result.violations << "\n";
  out << "hypothesis failures: " << result.hypothesis_failures << "\n";
  for (const auto& [generator, boxes] : result.summaries) {
    out << generator << ":\n";
    for (const BoxplotSummary& b : boxes) {
      out << "  " << std::left << std::setw(11) << b.label << std::right << " median " << std::setw(10)
          << std::setprecision(5) << b.median << "  mean " << std::setw(10) << b.mean << "  max "
          << std::setw(10) << b.whisker_high << "  outliers " << b.outliers.size() << "\n";
    }
  }
}

void print_violations(const ExperimentResult& result, std::ostream& out) {
  for (const TrialResult& tr : result.trials) {
    if (!tr.ok) {
      out << "warning: " << to_string(tr.generator) << " trial " << tr.trial << " excluded: " << tr.error << "\n";
      continue;
    }
    for (const InheritanceRecord& rec : tr.records) {
      if (!rec.violated()) {
        continue;
      }
      for (const BoundCheck& c : rec.checks) {
        if (!c.satisfied) {
          out << "violation: " << to_string(tr.generator) << " trial " << tr.trial << " " << to_string(rec.kind)
              << " i=" << rec.i << " t=" << rec.t << " " << c.label << ": " << format_real(c.lhs) << " > "
              << format_real(c.rhs) << "\n";
        }
      }
    }
  }
}

ProgressFn progress_printer(std::ostream& err, std::size_t total) {
  auto done = std::make_shared<std::size_t>(0);
  return [&err, total, done](const TrialResult& tr) {
    ++*done;
    err << "[" << *done << "/" << total << "] " << to_string(tr.generator) << " trial " << tr.trial << ": "
        << (tr.ok ? "ok" : "excluded (" + tr.error + ")") << " in " << std::fixed << std::setprecision(2)
        << tr.wall_seconds << "s" << std::defaultfloat << "\n";
  };
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Incoherence and conditioning of sampled TT subtensors"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::string output_dir;
  bool quiet = false;
  CLI::App* run = app.add_subcommand("run", "Run the full sampling experiment and write outputs");
  add_common(run, run_opts);
  run->add_option("--output-dir", output_dir, "Override output_dir");
  run->add_flag("--quiet", quiet, "No per-trial progress");

  CommonOptions verify_opts;
  CLI::App* verify = app.add_subcommand("verify", "Run the bound checks only; exit 1 on any violation");
  add_common(verify, verify_opts);

  CommonOptions gen_opts;
  std::string out_path;
  std::string generator_name;
  std::size_t trial = 1;
  CLI::App* generate_cmd = app.add_subcommand("generate", "Write one generated TT tensor to a container file");
  add_common(generate_cmd, gen_opts);
  generate_cmd->add_option("--out", out_path, "Output file")->required();
  generate_cmd->add_option("--generator", generator_name, "gaussian | hadamard | uniform (default: first in config)");
  generate_cmd->add_option("--trial", trial, "Trial index whose tensor is generated")->check(CLI::PositiveNumber);

  std::string in_dir;
  bool no_svg = false;
  CLI::App* report = app.add_subcommand("report", "Recompute summaries and figures from trials.csv");
  report->add_option("--in", in_dir, "Directory holding trials.csv")->required();
  report->add_flag("--no-svg", no_svg, "Skip SVG output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) {
      ExperimentConfig config = build_config(run_opts);
      if (!output_dir.empty()) {
        config.output_dir = output_dir;
      }
      const std::size_t total = config.trials * config.generators.size();
      const ExperimentResult result =
          run_experiment(config, quiet ? ProgressFn{} : progress_printer(err, total));
      print_violations(result, err);
      write_outputs(result);
      print_summary(result, out);
      out << "outputs written to " << config.output_dir << "\n";
      return result.violations == 0 ? kExitOk : kExitViolation;
    }
    if (*verify) {
      const ExperimentConfig config = build_config(verify_opts);
      const ExperimentResult result = run_experiment(config);
      print_violations(result, err);
      std::size_t checks = 0;
      for (const TrialResult& tr : result.trials) {
        for (const InheritanceRecord& rec : tr.records) {
          checks += rec.checks.size();
        }
      }
      out << "checked " << checks << " inequalities over " << result.trials.size() << " trials: "
          << result.violations << " violations, " << result.failed_trials << " excluded trials\n";
      return result.violations == 0 ? kExitOk : kExitViolation;
    }
    if (*generate_cmd) {
      const ExperimentConfig config = build_config(gen_opts);
      GeneratorKind kind = config.generators.front();
      if (!generator_name.empty()) {
        const auto parsed = parse_generator_kind(generator_name);
        if (!parsed) {
          throw ConfigError("unknown generator '" + generator_name + "'");
        }
        kind = *parsed;
      }
      GeneratorSpec spec;
      spec.kind = kind;
      spec.shape = config.shape;
      spec.ranks = config.ranks;
      spec.seed = trial_seed(config, kind, trial);
      const GeneratedTensor g = generate(spec, config.rank_tol);
      write_tt_file(out_path, g.tensor, {to_string(kind), g.seed_used});
      out << "wrote " << to_string(kind) << " tensor (seed " << g.seed_used << ") to " << out_path << "\n";
      return kExitOk;
    }
    if (*report) {
      const auto summaries = report_from_directory(in_dir, !no_svg);
      std::size_t boxes = 0;
      for (const auto& [g, list] : summaries) {
        boxes += list.size();
      }
      out << "recomputed " << boxes << " summaries in " << in_dir << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitViolation;
  }
  return kExitUsage;
}

} // namespace ttinherit
