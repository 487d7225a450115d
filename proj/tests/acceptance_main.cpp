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

// End-to-end release gate. Each numbered check prints one PASS/FAIL line with
// its key measurements and wall time; the process exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "rio/reports.hpp"

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int number, const char* name,
               const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  bool ok = false;
  Clock::time_point start = Clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("[%s] %d. %s: %s (%.2f s)\n", ok ? "PASS" : "FAIL", number, name,
              detail.str().c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

}  // namespace

int main() {
  using namespace rio;
  Clock::time_point suite_start = Clock::now();

  criterion(1, "protocol output equals the locally applied operator", [](auto& detail) {
    Clock::time_point start = Clock::now();
    RunConfig cfg;  // 50 samples
    ProtocolCampaign campaign = run_verify_protocol(cfg);
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    detail << campaign.cases.size() << " cases, max residual " << campaign.max_residual
           << ", max branch-probability error " << campaign.max_branch_probability_error;
    return campaign.cases.size() == 24u * 16u * 50u && campaign.pass &&
           campaign.max_residual < 1e-10 && campaign.max_branch_probability_error < 1e-12 &&
           secs < 10.0;
  });

  criterion(2, "x=10 branch reproduces the intermediate amplitudes", [](auto& detail) {
    std::mt19937_64 rng(20260822);
    StateVector xi = haar_state({2, 2}, rng);
    DiagonalPhases t = random_phases(rng);
    ProtocolTranscript tr = run_protocol(10, t, xi, std::array<int, 4>{0, 0, 1, 1});

    const Vector& y = xi.amps();
    const Vector& pre = tr.pre_recovery_output.amps();
    double pre_dev = std::max({std::abs(pre(0) - y(0) * t[3]), std::abs(pre(1) - y(1) * t[0]),
                               std::abs(pre(2) + y(2) * t[1]), std::abs(pre(3) + y(3) * t[2])});
    Vector target = build_T2(10, t).mat() * y;
    double out_dev = (tr.output.amps() - target).cwiseAbs().maxCoeff();
    detail << "pre-recovery deviation " << pre_dev << ", exact-phase output deviation "
           << out_dev;
    return pre_dev < 1e-12 && out_dev < 1e-12;
  });

  criterion(3, "all 24 recovery words audit clean with minimal alternatives", [](auto& detail) {
    Clock::time_point start = Clock::now();
    auto audits = verify_decompositions();
    int matches = 0;
    bool within = true, sound = true;
    for (const auto& a : audits) {
      matches += a.match ? 1 : 0;
      within = within && a.synthesized.size() <= a.published.size();
      sound = sound &&
              (sequence_matrix(a.synthesized) - build_R2(a.x).mat()).cwiseAbs().maxCoeff() == 0.0;
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    detail << matches << "/24 match, synthesized words "
           << (within ? "within" : "EXCEED") << " published lengths";
    return matches == 24 && within && sound && secs < 1.0;
  });

  criterion(4, "composed cavity gates equal the ideal gates", [](auto& detail) {
    RunConfig cfg;
    PhysicalGatesCampaign campaign = run_physical_gates(cfg);
    detail << "cnot residual " << campaign.cnot_residual << " leakage "
           << campaign.cnot_aux_leakage << ", hadamard residual " << campaign.hadamard_residual
           << " leakage " << campaign.hadamard_photon_leakage;
    return campaign.cnot_residual < 1e-9 && campaign.hadamard_residual < 1e-9 &&
           campaign.cnot_aux_leakage < 1e-10 && campaign.hadamard_photon_leakage < 1e-10;
  });

  criterion(5, "staggered-entry sweep brackets the reference fidelity", [](auto& detail) {
    RunConfig cfg;  // offset 0.01, grid step 0.1
    SweepCampaign campaign = run_fidelity_sweep(cfg);
    std::mt19937_64 rng(5);
    double ideal = timing_error_fidelity(0.0, haar_state({2, 2}, rng), random_phases(rng));
    detail << campaign.rows.size() << " rows, max " << campaign.max_fidelity << ", |max-0.998| = "
           << campaign.reference_delta << ", offset-0 fidelity " << ideal << ", probes "
           << campaign.probe_fidelities[0] << " / " << campaign.probe_fidelities[1] << " / "
           << campaign.probe_fidelities[2];
    return campaign.pass && campaign.max_fidelity >= 0.995 &&
           campaign.max_fidelity <= 1.0 + 1e-12 && campaign.reference_delta <= 0.005 &&
           std::abs(ideal - 1.0) < 1e-10 && campaign.probe_fidelities[0] > 0.9999 &&
           campaign.probe_fidelities[2] > 0.999;
  });

  criterion(6, "stage times and lifetime budgets", [](auto& detail) {
    TimingReport r = timing_report(PhysicalParams{});
    detail << "cavity stage " << r.cnot_stage_time << " s, exchange stage " << r.jc_stage_time
           << " s, photon lifetime " << r.photon_lifetime << " s, total " << r.total_time
           << " s";
    bool bands = r.cnot_stage_time > 1.9e-4 && r.cnot_stage_time < 2.2e-4 &&
                 r.jc_stage_time > 1.9e-5 && r.jc_stage_time < 2.2e-5 &&
                 r.photon_lifetime > 3.0e-4 && r.photon_lifetime < 3.3e-4;
    return bands && r.within_radiative && r.within_cavity_decay;
  });

  criterion(7, "numerical hygiene across the modules", [](auto& detail) {
    std::mt19937_64 rng(7);
    double worst_unitarity = 0.0;
    for (int x = 1; x <= 24; ++x) {
      Matrix m = build_T2(x, random_phases(rng)).mat();
      worst_unitarity = std::max(
          worst_unitarity, (m.adjoint() * m - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff());
    }

    double worst_norm = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      int x = 1 + static_cast<int>(rng() % 24);
      auto tr = run_protocol(x, random_phases(rng), haar_state({2, 2}, rng), std::nullopt, rng());
      worst_norm = std::max(worst_norm, std::abs(tr.output.norm() - 1.0));
    }

    StateVector probe = haar_state({2, 2, 2}, rng);
    double branch_sum = 0.0;
    for (const auto& b : enumerate_branches(probe, {0, 2})) branch_sum += b.probability;

    PhysicalParams p;
    StateVector swapped = jc_evolve(StateVector::basis({2, 3}, 3), p, 0.37 * p.jc_stage_time());
    double trunc_leak = std::abs(swapped.amps()(2));

    double aux_leak = 0.0;
    for (int c : {0, 1, 3, 4})
      aux_leak = std::max(
          aux_leak, rio::detail::aux_population(physical_cnot(StateVector::basis({3, 3}, c), p)));

    detail << "unitarity " << worst_unitarity << ", norm drift " << worst_norm
           << ", branch-probability sum error " << std::abs(branch_sum - 1.0)
           << ", truncation leak " << trunc_leak << ", auxiliary leak " << aux_leak;
    return worst_unitarity < 1e-12 && worst_norm < 1e-10 && std::abs(branch_sum - 1.0) < 1e-10 &&
           trunc_leak < 1e-12 && aux_leak < 1e-10;
  });

  double total = std::chrono::duration<double>(Clock::now() - suite_start).count();
  std::printf("%s: %d/7 criteria passed in %.2f s\n", failures == 0 ? "OK" : "FAILED",
              7 - failures, total);
  return failures == 0 ? 0 : 1;
}
