#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "json.hpp"

namespace {

int report_error(const std::string& kind, const std::string& message, int code) {
  nlohmann::json err = {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
  std::cerr << err.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arnoldi cross iteration and restarted optimum s-gradient experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  aci::cli::Overrides overrides;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Run config (JSON)")->required();
    cmd->add_option("--out-dir", out_dir, "Output directory");
    cmd->add_option("--seed", overrides.seed, "Start and iteration seed");
    cmd->add_option("--max-steps", overrides.max_steps, "Step limit");
    cmd->add_option("--diff-tol", overrides.diff_tol, "Difference tolerance");
  };

  CLI::App* run = app.add_subcommand("run", "Execute one configured run");
  add_common(run);
  CLI::App* sweep = app.add_subcommand("sweep", "Execute seeded starts in parallel");
  add_common(sweep);
  sweep->add_option("--starts", overrides.starts, "Number of starts");

  std::string trace_path, manifest_path, report_name = "report.json";
  CLI::App* analyze = app.add_subcommand("analyze", "Rebuild the report of a stored run");
  analyze->add_option("--trace", trace_path, "Trace CSV")->required();
  analyze->add_option("--eigendata", manifest_path, "Run manifest (run.json)")->required();
  analyze->add_option("--out-dir", out_dir, "Output directory");
  analyze->add_option("--report", report_name, "Report file name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_error("usage", e.what(), 2);
  }

  try {
    if (*analyze) {
      aci::cli::cmd_analyze(trace_path, manifest_path, out_dir, report_name);
      return 0;
    }
    aci::cli::RunConfig cfg = aci::cli::load_run_config(config_path);
    aci::cli::apply_overrides(cfg, overrides);
    if (*run) {
      aci::cli::cmd_run(cfg, out_dir);
    } else {
      aci::cli::cmd_sweep(cfg, out_dir);
    }
    return 0;
  } catch (const aci::Error& e) {
    return report_error(aci::to_string(e.kind()), e.what(), aci::cli::exit_code(e.kind()));
  } catch (const std::exception& e) {
    return report_error("failure", e.what(), 1);
  }
}
