#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coarse/isometry.hpp"
#include "coarse/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitStageFailure = 2;
constexpr int kExitSpecError = 3;

coarse::Json load_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  coarse::Json j;
  in >> j;
  return j;
}

void save_json(const fs::path& file, const coarse::Json& j) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump(2) << "\n";
}

struct RunLine {
  int code = kExitPass;
  std::string text;
};

RunLine run_one(const fs::path& file, std::optional<std::uint64_t> seed_override,
                bool strict, const fs::path& out_dir) {
  try {
    coarse::Scenario sc = coarse::load_scenario(file);
    if (seed_override) sc.seed = *seed_override;
    const coarse::RunOutcome outcome = coarse::run_scenario(sc, strict);
    const fs::path scenario_dir = out_dir / sc.name;
    fs::create_directories(scenario_dir);
    save_json(scenario_dir / "report.json", outcome.report);
    coarse::write_plot_data(outcome.report, scenario_dir);
    std::string text = sc.name + ": " +
                       outcome.report["verdict"].get<std::string>();
    if (outcome.exit_code == kExitStageFailure)
      text += " at stage \"" +
              outcome.report["failed_stage"].get<std::string>() + "\"";
    return RunLine{outcome.exit_code, std::move(text)};
  } catch (const std::exception& e) {
    return RunLine{kExitSpecError,
                   file.string() + ": error: " + std::string(e.what())};
  }
}

int cmd_generate(const fs::path& file, std::optional<std::uint64_t> seed,
                 const fs::path& out_dir) {
  coarse::Scenario sc = coarse::load_scenario(file);
  if (seed) sc.seed = *seed;
  const auto written = coarse::generate_to(sc, out_dir / sc.name);
  for (const auto& p : written) std::cout << p.string() << "\n";
  return kExitPass;
}

int cmd_run(const std::vector<fs::path>& files, std::optional<std::uint64_t> seed,
            bool strict, const fs::path& out_dir) {
  // Scenarios are independent and internally deterministic, so a batch
  // fans out across threads; output lines are kept in input order.
  std::vector<std::future<RunLine>> jobs;
  jobs.reserve(files.size());
  for (const auto& file : files)
    jobs.push_back(std::async(std::launch::async, run_one, file, seed, strict,
                              out_dir));
  int code = kExitPass;
  for (auto& job : jobs) {
    const RunLine line = job.get();
    std::cout << line.text << "\n";
    code = std::max(code, line.code);
  }
  return code;
}

int cmd_verify(const fs::path& file, std::optional<std::uint64_t> seed) {
  coarse::Scenario sc = coarse::load_scenario(file);
  if (seed) sc.seed = *seed;
  const coarse::GeneratedInputs in = coarse::generate_inputs(sc);
  const double defect = coarse::isometry_defect(in.u);
  if (defect > sc.config.isometry_tol) {
    std::cout << sc.name << ": stage \"check_isometry\" failed, defect " << defect
              << " above tolerance " << sc.config.isometry_tol << "\n";
    return kExitStageFailure;
  }
  std::cout << sc.name << ": ok, spaces " << in.space_x.domain().size() << " and "
            << in.space_y.domain().size() << " points, isometry defect " << defect
            << "\n";
  return kExitPass;
}

int cmd_diff(const fs::path& a_file, const fs::path& b_file) {
  const coarse::Json diff = coarse::report_diff(load_json(a_file), load_json(b_file));
  std::cout << diff.dump(2) << "\n";
  return diff.empty() ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarse structure recovery toolkit"};
  app.require_subcommand(1);

  std::vector<fs::path> scenarios;
  fs::path out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool strict = false;
  fs::path diff_a, diff_b;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Override the scenario seed");
  };

  CLI::App* generate =
      app.add_subcommand("generate", "Write deterministic inputs for a scenario");
  generate->add_option("--scenario", scenarios, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  generate->add_option("--out", out_dir, "Output directory");
  add_seed(generate);

  CLI::App* run = app.add_subcommand("run", "Execute scenarios and emit reports");
  run->add_option("--scenario", scenarios, "Scenario file, repeatable")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--strict", strict,
                "Treat skipped stages and partial maps as check failures");
  add_seed(run);

  CLI::App* verify =
      app.add_subcommand("verify", "Validate a scenario and its generated isometry");
  verify->add_option("--scenario", scenarios, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  add_seed(verify);

  CLI::App* diff = app.add_subcommand("diff", "Compare two reports, ignoring timing");
  diff->add_option("a", diff_a, "First report")->required()->check(CLI::ExistingFile);
  diff->add_option("b", diff_b, "Second report")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitSpecError;
  }

  try {
    if (generate->parsed()) return cmd_generate(scenarios.front(), seed, out_dir);
    if (run->parsed()) return cmd_run(scenarios, seed, strict, out_dir);
    if (verify->parsed()) return cmd_verify(scenarios.front(), seed);
    if (diff->parsed()) return cmd_diff(diff_a, diff_b);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpecError;
  }
  return kExitSpecError;
}
