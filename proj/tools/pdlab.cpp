// Command-line driver: check, times, spectrum, simulate, verify.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pdlab/experiments.hpp"
#include "pdlab/report.hpp"
#include "pdlab/scenario.hpp"

namespace {

using namespace pdlab;

std::vector<double> parse_t_grid(const std::string& spec) {
  const auto a = spec.find(':');
  const auto b = spec.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos)
    throw CLI::ValidationError("--t-grid", "expected start:stop:step");
  return time_grid(std::stod(spec.substr(0, a)), std::stod(spec.substr(a + 1, b - a - 1)),
                   std::stod(spec.substr(b + 1)));
}

void print(const Document& d) { std::cout << dump_document(d); }

int cmd_check(const std::string& path) {
  const Scenario sc = parse_scenario(read_text_file(path));
  const auto result = check_system(sc.system);
  Document d;
  d["scenario"] = sc.name;
  d["check"] = to_document(result);
  print(d);
  return result.passed() ? 0 : 1;
}

int cmd_times(const std::string& path, const std::string& grid) {
  const Scenario sc = parse_scenario(read_text_file(path));
  if (auto errors = validation_errors(validate_system(sc.system)); !errors.empty())
    throw ScenarioError(std::move(errors));
  const auto t_grid = grid.empty() ? std::vector<double>{} : parse_t_grid(grid);
  print(to_document(times_report(sc.system, t_grid)));
  return 0;
}

int cmd_spectrum(const std::string& path, double xi_max, int samples) {
  const Scenario sc = parse_scenario(read_text_file(path));
  const auto scan = gamma_estimate(sc.system, xi_max, samples);
  print(to_document(scan, true));
  return 0;
}

int cmd_simulate(const std::string& path, const std::string& out) {
  const Scenario sc = load_scenario_file(path);
  SummaryInputs in;
  in.scenario = &sc;
  in.spectrum = gamma_estimate(sc.system);
  if (sc.kind == ExperimentKind::kConservationProbe) {
    auto probe = conservation_probe(sc);
    in.trajectory = probe.trajectory;
    in.probe = std::move(probe);
  } else {
    in.trajectory = simulate(sc);
  }
  if (!out.empty()) export_results(in, out);
  print(summary_document(in));
  return 0;
}

int cmd_verify(const std::string& path, const std::string& out) {
  const Scenario sc = load_scenario_file(path);
  auto result = verify_pipeline(sc);
  SummaryInputs in;
  in.scenario = &sc;
  in.spectrum = result.spectrum;
  in.calibration = result.calibration;
  in.envelope = result.envelope;
  in.trajectory = std::move(result.trajectory);
  if (!out.empty()) export_results(in, out);
  print(summary_document(in));
  return result.envelope.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delayed-decay laboratory for partially dissipative hyperbolic systems"};
  app.require_subcommand(1);

  std::string scenario;
  std::string t_grid;
  std::string out;
  double xi_max = 100.0;
  int samples = 400;

  auto* check = app.add_subcommand("check", "validation and Shizuta-Kawashima checks");
  check->add_option("scenario", scenario, "scenario file")->required();

  auto* times = app.add_subcommand("times", "characteristic-time calculus and sharp delay table");
  times->add_option("scenario", scenario, "scenario file")->required();
  times->add_option("--t-grid", t_grid, "time grid start:stop:step for the delay table");

  auto* spectrum = app.add_subcommand("spectrum", "spectral-abscissa scan of the full-damping symbol");
  spectrum->add_option("scenario", scenario, "scenario file")->required();
  spectrum->add_option("--xi-max", xi_max, "largest frequency")->check(CLI::PositiveNumber);
  spectrum->add_option("--samples", samples, "samples per grid segment")->check(CLI::Range(2, 1000000));

  auto* simulate_cmd = app.add_subcommand("simulate", "run the transport solver");
  simulate_cmd->add_option("scenario", scenario, "scenario file")->required();
  simulate_cmd->add_option("--out", out, "output directory for trajectory.csv and summary.json");

  auto* verify = app.add_subcommand("verify", "calibrate, run and check the delayed envelope");
  verify->add_option("scenario", scenario, "scenario file")->required();
  verify->add_option("--out", out, "output directory for trajectory.csv and summary.json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return cmd_check(scenario);
    if (*times) return cmd_times(scenario, t_grid);
    if (*spectrum) return cmd_spectrum(scenario, xi_max, samples);
    if (*simulate_cmd) return cmd_simulate(scenario, out);
    if (*verify) return cmd_verify(scenario, out);
  } catch (const ScenarioError& e) {
    for (const auto& msg : e.errors()) std::cerr << "error: " << msg << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
