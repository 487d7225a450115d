// Copyright 2026 the rio-cqed authors
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

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rio/reports.hpp"

namespace {

struct Dials {
  double g_khz = 24.0;
  double delta_over_g = 10.0;
  double q_factor = 1e8;
  double cavity_ghz = 50.0;
  double radiative_time = 3e-2;
  double pulse_time = 6.3e-6;
  double excitation_probability = 0.01;
};

int emit(const std::string& body, const std::string& summary, const std::string& out_path,
         bool pass) {
  if (out_path.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open output path " << out_path << "\n";
      return 2;
    }
    out << body;
    if (!out.good()) {
      std::cerr << "error: write failed for " << out_path << "\n";
      return 2;
    }
  }
  std::cerr << summary << "\n";
  return pass ? 0 : 1;
}

template <typename Campaign>
int emit_campaign(const Campaign& campaign, const rio::RunConfig& cfg) {
  std::string body = cfg.format == "json" ? rio::to_json(campaign).dump(2) + "\n"
                                          : rio::to_csv(campaign);
  return emit(body, rio::summary_text(campaign), cfg.out_path, campaign.pass);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Remote two-qubit operation protocol: verification campaigns and reports"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file");

  rio::RunConfig cfg;
  Dials dials;
  app.add_option("--seed", cfg.seed, "base seed for random payload/phase draws")
      ->capture_default_str();
  app.add_option("--samples", cfg.samples, "random draws per operator index")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tolerance", cfg.tolerance,
                 "residual tolerance (default depends on the command)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--g-khz", dials.g_khz, "atom-cavity coupling g/2pi in kHz")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--delta-over-g", dials.delta_over_g, "detuning as a multiple of g")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--q-factor", dials.q_factor, "cavity quality factor")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--cavity-ghz", dials.cavity_ghz, "cavity frequency in GHz")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--radiative-time", dials.radiative_time, "atomic radiative time in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--pulse-time", dials.pulse_time, "classical-field pass time in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--excitation-probability", dials.excitation_probability,
                 "residual cavity excitation probability")
      ->check(CLI::Range(1e-12, 1.0))
      ->capture_default_str();
  app.add_option("--offset", cfg.offset, "entry offset as a fraction of the cavity stage time")
      ->check(CLI::Range(0.0, 0.5))
      ->capture_default_str();
  app.add_option("--grid-step", cfg.grid_step, "sweep grid step for the y coefficients")
      ->check(CLI::Range(1e-3, 1.0))
      ->capture_default_str();
  app.add_option("--format", cfg.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", cfg.out_path, "write the report to this path instead of stdout");
  app.add_flag("--verbose", cfg.verbose, "include gate matrices in reports that carry them");

  auto* verify_protocol = app.add_subcommand(
      "verify-protocol", "run every operator x every measurement branch against the target state");
  auto* verify_decompositions = app.add_subcommand(
      "verify-decompositions", "audit the published recovery words and synthesize minimal ones");
  auto* physical_gates = app.add_subcommand(
      "physical-gates", "compare composed cavity gates against their ideal counterparts");
  auto* fidelity_sweep = app.add_subcommand(
      "fidelity-sweep", "sweep payload coefficients under a staggered cavity-entry offset");
  auto* timing_rep = app.add_subcommand(
      "timing-report", "derived stage times and lifetime feasibility checks");
  for (CLI::App* sub : {verify_protocol, verify_decompositions, physical_gates, fidelity_sweep,
                        timing_rep})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.params = rio::PhysicalParams::from_dials(dials.g_khz, dials.delta_over_g, dials.q_factor,
                                               dials.cavity_ghz, dials.radiative_time,
                                               dials.pulse_time, dials.excitation_probability);
  if (!cfg.params.dispersive_regime())
    std::cerr << "warning: detuning below 10x coupling; the two-atom Hamiltonian assumes the "
                 "dispersive regime\n";

  try {
    cfg.validate();
    if (verify_protocol->parsed()) return emit_campaign(rio::run_verify_protocol(cfg), cfg);
    if (verify_decompositions->parsed())
      return emit_campaign(rio::run_verify_decompositions(cfg), cfg);
    if (physical_gates->parsed()) return emit_campaign(rio::run_physical_gates(cfg), cfg);
    if (fidelity_sweep->parsed()) return emit_campaign(rio::run_fidelity_sweep(cfg), cfg);
    if (timing_rep->parsed()) return emit_campaign(rio::run_timing_report(cfg), cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
