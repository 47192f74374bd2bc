#include "stormbox/format.hpp"
#include "stormbox/inp.hpp"
#include "stormbox/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace stormbox;

constexpr int kConfigError = 2;
constexpr int kDiverged = 3;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Maps library exceptions to exit codes, with diagnostics on stderr.
template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const inp::ParseError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "error: " << d.to_string() << '\n';
    return kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ReferenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return kDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_run(const std::string& scenario, const std::string& controller, const std::string& out_path,
            const EnvOptions& options) {
  return guarded([&] {
    auto env = load_scenario(scenario, options);
    auto ctl = make_controller(controller, env.metadata());
    const auto summary = run_controller(env, *ctl, controller);
    for (const auto& w : env.warnings()) std::cerr << "warning: " << w << '\n';
    if (!out_path.empty()) {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return 1;
      }
      write_trace_csv(env.trace(), out);
    }
    std::cout << "performance=" << format_number(summary.performance) << '\n';
    return 0;
  });
}

int cmd_compare(const std::string& scenario, const std::string& controllers, const std::string& format,
                const EnvOptions& options) {
  return guarded([&] {
    const auto rows = compare(scenario, split_list(controllers), options);
    if (format == "csv") {
      write_comparison_csv(rows, std::cout);
    } else {
      write_comparison_table(rows, std::cout);
    }
    return 0;
  });
}

int cmd_validate(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return kConfigError;
  }
  std::ostringstream text;
  text << in.rdbuf();
  try {
    const auto result = inp::parse(text.str());
    for (const auto& w : result.warnings) std::cout << "warning: " << w.to_string() << '\n';
    std::cout << path << ": ok (" << result.network.nodes.size() << " nodes, " << result.network.links.size()
              << " links)\n";
    return 0;
  } catch (const inp::ParseError& e) {
    for (const auto& d : e.diagnostics()) std::cout << "error: " << d.to_string() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stormwater control sandbox"};
  app.require_subcommand(1);

  std::string scenario;
  std::string controller = "uncontrolled";
  std::string controllers = "uncontrolled,rule-based,equal-filling";
  std::string out_path;
  std::string format = "table";
  std::string inp_path;
  std::optional<double> duration_override;
  std::optional<double> timestep_override;

  auto add_env_flags = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario, "built-in scenario name or YAML config path")->required();
    sub->add_option("--duration-override-s", duration_override, "run length in seconds");
    sub->add_option("--timestep-override-s", timestep_override, "control timestep in seconds");
  };

  auto* run = app.add_subcommand("run", "run one controller and export its trace");
  add_env_flags(run);
  run->add_option("--controller", controller, "uncontrolled, rule-based or equal-filling");
  run->add_option("--out", out_path, "trace CSV path");

  auto* cmp = app.add_subcommand("compare", "score several controllers on one scenario");
  add_env_flags(cmp);
  cmp->add_option("--controllers", controllers, "comma-separated controller names");
  cmp->add_option("--format", format, "table or csv")->check(CLI::IsMember({"table", "csv"}));

  auto* val = app.add_subcommand("validate", "check an .inp network file");
  val->add_option("inp", inp_path, ".inp path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  EnvOptions options;
  options.duration_override_s = duration_override;
  options.timestep_override_s = timestep_override;
  if (run->parsed()) return cmd_run(scenario, controller, out_path, options);
  if (cmp->parsed()) return cmd_compare(scenario, controllers, format, options);
  return cmd_validate(inp_path);
}
