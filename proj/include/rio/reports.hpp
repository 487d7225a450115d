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

#pragma once

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "rio/cavity.hpp"
#include "rio/sampling.hpp"

namespace rio {

using ordered_json = nlohmann::ordered_json;

/// Shared knobs for every campaign command.
struct RunConfig {
  uint64_t seed = 0;
  int samples = 50;
  double tolerance = -1.0;  ///< negative requests the command's own default
  PhysicalParams params;
  double offset = 0.01;
  double grid_step = 0.1;
  std::string format = "json";
  std::string out_path;  ///< empty writes to stdout
  bool verbose = false;

  void validate() const {
    if (samples < 1) throw std::invalid_argument("RunConfig: samples must be >= 1");
    if (!std::isfinite(tolerance)) throw std::invalid_argument("RunConfig: tolerance must be finite");
    if (!(grid_step > 0.0) || grid_step > 1.0)
      throw std::invalid_argument("RunConfig: grid step must be in (0, 1]");
    if (!(offset >= 0.0) || offset > 0.5)
      throw std::invalid_argument("RunConfig: offset must be in [0, 0.5]");
    if (format != "json" && format != "csv")
      throw std::invalid_argument("RunConfig: format must be json or csv");
    params.validate();
  }

  double resolve_tolerance(double command_default) const {
    return tolerance < 0.0 ? command_default : tolerance;
  }
};

namespace detail {

inline std::string fp(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline ordered_json params_json(const PhysicalParams& p) {
  return ordered_json{{"coupling_rad_s", p.coupling},
                      {"detuning_rad_s", p.detuning},
                      {"q_factor", p.q_factor},
                      {"cavity_frequency_hz", p.cavity_frequency},
                      {"radiative_time_s", p.radiative_time},
                      {"pulse_time_s", p.pulse_time},
                      {"excitation_probability", p.excitation_probability}};
}

inline ordered_json config_json(const RunConfig& cfg, double resolved_tolerance) {
  return ordered_json{{"seed", cfg.seed},
                      {"samples", cfg.samples},
                      {"tolerance", resolved_tolerance},
                      {"offset", cfg.offset},
                      {"grid_step", cfg.grid_step},
                      {"params", params_json(cfg.params)}};
}

inline ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(ordered_json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string sequence_names(const GateSequence& seq) {
  if (seq.empty()) return "(empty)";
  std::string out;
  for (size_t k = 0; k < seq.size(); ++k) {
    if (k) out += " ";
    out += generator_name(seq[k]);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// verify-protocol

struct ProtocolCaseResult {
  int x;
  int sample;
  std::array<int, 4> outcomes;  ///< b1, b2, a1, a2
  double bob_branch_probability;
  double alice_branch_probability;
  double residual;  ///< phase-aligned distance of the output from the target state
};

struct ProtocolCampaign {
  RunConfig config;
  double tolerance;
  std::vector<ProtocolCaseResult> cases;
  double max_residual;
  double max_branch_probability_error;
  std::optional<ProtocolCaseResult> first_failure;
  bool pass;
};

/// Runs every operator index against every forced measurement branch, with
/// `samples` Haar-random payload/phase draws per index shared across the 16
/// branches of that draw.
inline ProtocolCampaign run_verify_protocol(const RunConfig& cfg) {
  cfg.validate();
  double tol = cfg.resolve_tolerance(kDerivedTol);
  ProtocolCampaign out{cfg, tol, {}, 0.0, 0.0, std::nullopt, true};
  out.cases.reserve(24 * 16 * cfg.samples);
  for (int x = 1; x <= 24; ++x) {
    for (int sample = 0; sample < cfg.samples; ++sample) {
      std::mt19937_64 rng(derive_seed(cfg.seed, x, sample));
      StateVector xi = haar_state({2, 2}, rng);
      DiagonalPhases t = random_phases(rng);
      StateVector expected =
          StateVector::unchecked({2, 2}, build_T2(x, t).mat() * xi.amps());
      for (int branch = 0; branch < 16; ++branch) {
        std::array<int, 4> bits{(branch >> 3) & 1, (branch >> 2) & 1, (branch >> 1) & 1,
                                branch & 1};
        ProtocolTranscript tr = run_protocol(x, t, xi, bits);
        double residual = global_phase_align(expected, tr.output).residual;
        ProtocolCaseResult row{x,
                               sample,
                               bits,
                               tr.bob_branch_probability,
                               tr.alice_branch_probability,
                               residual};
        out.max_residual = std::max(out.max_residual, residual);
        out.max_branch_probability_error =
            std::max({out.max_branch_probability_error,
                      std::abs(tr.bob_branch_probability - 0.25),
                      std::abs(tr.alice_branch_probability - 0.25)});
        if (residual >= tol && !out.first_failure) out.first_failure = row;
        out.cases.push_back(std::move(row));
      }
    }
  }
  out.pass = !out.first_failure.has_value();
  return out;
}

inline ordered_json to_json(const ProtocolCampaign& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& c : r.cases)
    rows.push_back(ordered_json{{"x", c.x},
                                {"x_bits", x_bit_string(c.x)},
                                {"sample", c.sample},
                                {"b1", c.outcomes[0]},
                                {"b2", c.outcomes[1]},
                                {"a1", c.outcomes[2]},
                                {"a2", c.outcomes[3]},
                                {"bob_branch_probability", c.bob_branch_probability},
                                {"alice_branch_probability", c.alice_branch_probability},
                                {"residual", c.residual}});
  ordered_json summary{{"rows", r.cases.size()},
                       {"max_residual", r.max_residual},
                       {"max_branch_probability_error", r.max_branch_probability_error}};
  if (r.first_failure)
    summary["first_failure"] = ordered_json{{"x", r.first_failure->x},
                                            {"b1", r.first_failure->outcomes[0]},
                                            {"b2", r.first_failure->outcomes[1]},
                                            {"a1", r.first_failure->outcomes[2]},
                                            {"a2", r.first_failure->outcomes[3]},
                                            {"residual", r.first_failure->residual}};
  return ordered_json{{"command", "verify-protocol"},
                      {"config", detail::config_json(r.config, r.tolerance)},
                      {"summary", std::move(summary)},
                      {"rows", std::move(rows)},
                      {"pass", r.pass}};
}

inline std::string to_csv(const ProtocolCampaign& r) {
  std::ostringstream out;
  out << "x,x_bits,sample,b1,b2,a1,a2,bob_branch_probability,alice_branch_probability,residual\n";
  for (const auto& c : r.cases)
    out << c.x << ',' << x_bit_string(c.x) << ',' << c.sample << ',' << c.outcomes[0] << ','
        << c.outcomes[1] << ',' << c.outcomes[2] << ',' << c.outcomes[3] << ','
        << detail::fp(c.bob_branch_probability) << ',' << detail::fp(c.alice_branch_probability)
        << ',' << detail::fp(c.residual) << '\n';
  return out.str();
}

inline std::string summary_text(const ProtocolCampaign& r) {
  std::ostringstream out;
  out << "verify-protocol: " << r.cases.size() << " cases, max residual " << r.max_residual
      << ", max branch-probability error " << r.max_branch_probability_error << ", "
      << (r.pass ? "pass" : "FAIL");
  if (r.first_failure)
    out << " (first failure at x=" << r.first_failure->x << " branch " << r.first_failure->outcomes[0]
        << r.first_failure->outcomes[1] << r.first_failure->outcomes[2] << r.first_failure->outcomes[3]
        << " residual " << r.first_failure->residual << ")";
  return out.str();
}

// ---------------------------------------------------------------------------
// verify-decompositions

struct DecompositionCampaign {
  RunConfig config;
  std::array<DecompositionAudit, 24> audits;
  bool all_match;
  bool synthesized_within_published;
  bool pass;
};

inline DecompositionCampaign run_verify_decompositions(const RunConfig& cfg) {
  cfg.validate();
  DecompositionCampaign out{cfg, verify_decompositions(), true, true, true};
  for (const auto& a : out.audits) {
    out.all_match = out.all_match && a.match;
    out.synthesized_within_published =
        out.synthesized_within_published && a.synthesized.size() <= a.published.size();
  }
  out.pass = out.all_match && out.synthesized_within_published;
  return out;
}

inline ordered_json to_json(const DecompositionCampaign& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& a : r.audits) {
    auto labels = permutation_of_index(a.x).labels();
    rows.push_back(ordered_json{{"x", a.x},
                                {"x_bits", x_bit_string(a.x)},
                                {"permutation", {labels[0], labels[1], labels[2], labels[3]}},
                                {"published", detail::sequence_names(a.published)},
                                {"synthesized", detail::sequence_names(a.synthesized)},
                                {"published_length", a.published.size()},
                                {"minimal_length", a.synthesized.size()},
                                {"deviation", a.deviation},
                                {"match", a.match}});
  }
  return ordered_json{{"command", "verify-decompositions"},
                      {"config", detail::config_json(r.config, kConstructiveTol)},
                      {"summary",
                       {{"all_match", r.all_match},
                        {"synthesized_within_published", r.synthesized_within_published}}},
                      {"rows", std::move(rows)},
                      {"pass", r.pass}};
}

inline std::string to_csv(const DecompositionCampaign& r) {
  std::ostringstream out;
  out << "x,x_bits,permutation,published,synthesized,published_length,minimal_length,deviation,match\n";
  for (const auto& a : r.audits) {
    auto labels = permutation_of_index(a.x).labels();
    out << a.x << ',' << x_bit_string(a.x) << ',' << labels[0] << ' ' << labels[1] << ' '
        << labels[2] << ' ' << labels[3] << ',' << detail::sequence_names(a.published) << ','
        << detail::sequence_names(a.synthesized) << ',' << a.published.size() << ','
        << a.synthesized.size() << ',' << detail::fp(a.deviation) << ','
        << (a.match ? "true" : "false") << '\n';
  }
  return out.str();
}

inline std::string summary_text(const DecompositionCampaign& r) {
  int matches = 0;
  for (const auto& a : r.audits) matches += a.match ? 1 : 0;
  std::ostringstream out;
  out << "verify-decompositions: " << matches << "/24 published sequences match, synthesized "
      << (r.synthesized_within_published ? "within" : "EXCEEDS") << " published lengths, "
      << (r.pass ? "pass" : "FAIL");
  return out.str();
}

// ---------------------------------------------------------------------------
// physical-gates

struct PhysicalGatesCampaign {
  RunConfig config;
  double tolerance;
  double cnot_residual;
  double cnot_aux_leakage;
  double hadamard_residual;
  double hadamard_photon_leakage;
  Matrix cnot_matrix;      ///< 9x9 composite
  Matrix hadamard_matrix;  ///< 4x4 composite on atom x {0,1} photons
  bool pass;
};

namespace detail {

inline double aligned_matrix_residual(const Matrix& actual, const Matrix& ideal) {
  cxd tr = (ideal.adjoint() * actual).trace();
  cxd phase = std::abs(tr) < 1e-14 ? cxd(1.0, 0.0) : tr / std::abs(tr);
  return (actual - phase * ideal).cwiseAbs().maxCoeff();
}

}  // namespace detail

inline PhysicalGatesCampaign run_physical_gates(const RunConfig& cfg) {
  cfg.validate();
  double tol = cfg.resolve_tolerance(1e-9);
  PhysicalGatesCampaign out{cfg, tol, 0, 0, 0, 0, Matrix(), Matrix(), false};

  out.cnot_matrix = physical_cnot_matrix(cfg.params);
  Matrix cnot4(4, 4);
  const int comp[4] = {0, 1, 3, 4};  // (g,e) x (g,e) rows of the 9-dim space
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) cnot4(r, c) = out.cnot_matrix(comp[r], comp[c]);
  out.cnot_residual = detail::aligned_matrix_residual(cnot4, gates::cnot().mat());
  for (int c = 0; c < 4; ++c) {
    StateVector basis = StateVector::basis({3, 3}, comp[c]);
    out.cnot_aux_leakage = std::max(
        out.cnot_aux_leakage, detail::aux_population(physical_cnot(basis, cfg.params)));
  }

  out.hadamard_matrix = physical_hadamard_matrix(cfg.params, 2);
  Matrix had2(2, 2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) had2(r, c) = out.hadamard_matrix(r * 2, c * 2);
  out.hadamard_residual = detail::aligned_matrix_residual(had2, gates::hadamard().mat());
  for (int a = 0; a < 2; ++a) {
    StateVector basis = StateVector::basis({2, 2}, a * 2);
    StateVector evolved = physical_hadamard(basis, cfg.params);
    double leak = std::norm(evolved.amps()(1)) + std::norm(evolved.amps()(3));
    out.hadamard_photon_leakage = std::max(out.hadamard_photon_leakage, leak);
  }

  out.pass = out.cnot_residual < tol && out.hadamard_residual < tol &&
             out.cnot_aux_leakage < kDerivedTol && out.hadamard_photon_leakage < kDerivedTol;
  return out;
}

inline ordered_json to_json(const PhysicalGatesCampaign& r) {
  ordered_json rows = ordered_json::array();
  rows.push_back(ordered_json{{"gate", "cnot"},
                              {"residual", r.cnot_residual},
                              {"aux_leakage", r.cnot_aux_leakage}});
  rows.push_back(ordered_json{{"gate", "hadamard"},
                              {"residual", r.hadamard_residual},
                              {"aux_leakage", r.hadamard_photon_leakage}});
  ordered_json doc{{"command", "physical-gates"},
                   {"config", detail::config_json(r.config, r.tolerance)},
                   {"summary",
                    {{"cnot_residual", r.cnot_residual},
                     {"hadamard_residual", r.hadamard_residual}}},
                   {"rows", std::move(rows)},
                   {"pass", r.pass}};
  if (r.config.verbose)
    doc["matrices"] = ordered_json{{"cnot", detail::matrix_json(r.cnot_matrix)},
                                   {"hadamard", detail::matrix_json(r.hadamard_matrix)}};
  return doc;
}

inline std::string to_csv(const PhysicalGatesCampaign& r) {
  std::ostringstream out;
  out << "gate,residual,aux_leakage\n";
  out << "cnot," << detail::fp(r.cnot_residual) << ',' << detail::fp(r.cnot_aux_leakage) << '\n';
  out << "hadamard," << detail::fp(r.hadamard_residual) << ','
      << detail::fp(r.hadamard_photon_leakage) << '\n';
  return out.str();
}

inline std::string summary_text(const PhysicalGatesCampaign& r) {
  std::ostringstream out;
  out << "physical-gates: cnot residual " << r.cnot_residual << ", hadamard residual "
      << r.hadamard_residual << ", " << (r.pass ? "pass" : "FAIL");
  return out.str();
}

// ---------------------------------------------------------------------------
// fidelity-sweep

struct SweepRow {
  double y_gg, y_ge, y_eg, y_ee;
  double offset_fraction;
  double fidelity;
};

struct SweepCampaign {
  RunConfig config;
  std::vector<SweepRow> rows;
  double min_fidelity;
  double max_fidelity;
  double mean_fidelity;
  std::array<double, 3> probe_offsets{1e-4, 1e-3, 1e-2};
  std::array<double, 3> probe_fidelities;  ///< at payload |gg> and unit phases
  double reference_fidelity = 0.998;
  double reference_delta;  ///< |max_fidelity - reference|
  bool pass;
};

/// Sweeps real nonnegative (y_gg, y_ge, y_eg) over the grid {0, step, ...}
/// subject to the unit-sphere constraint, with y_ee fixed by normalization and
/// all phases equal (a common phase moves the target by a global phase only,
/// so unity loses no generality).
inline SweepCampaign run_fidelity_sweep(const RunConfig& cfg) {
  cfg.validate();
  SweepCampaign out{cfg, {}, 1.0, 0.0, 0.0, {1e-4, 1e-3, 1e-2}, {0, 0, 0}, 0.998, 0.0, true};
  DiagonalPhases unit = DiagonalPhases::identity();

  int steps = static_cast<int>(std::floor(1.0 / cfg.grid_step + 1e-9));
  double sum = 0.0;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j)
      for (int k = 0; k <= steps; ++k) {
        double y1 = i * cfg.grid_step, y2 = j * cfg.grid_step, y3 = k * cfg.grid_step;
        double sq = y1 * y1 + y2 * y2 + y3 * y3;
        if (sq > 1.0 + 1e-9) continue;
        double y4 = std::sqrt(std::max(0.0, 1.0 - sq));
        Vector amps(4);
        amps << y1, y2, y3, y4;
        StateVector xi = StateVector::unchecked({2, 2}, std::move(amps));
        double f = timing_error_fidelity(cfg.offset, xi, unit, cfg.params);
        out.rows.push_back(SweepRow{y1, y2, y3, y4, cfg.offset, f});
        out.min_fidelity = std::min(out.min_fidelity, f);
        out.max_fidelity = std::max(out.max_fidelity, f);
        sum += f;
        if (!(f >= 0.0 && f <= 1.0 + kDerivedTol)) out.pass = false;
      }
  out.mean_fidelity = out.rows.empty() ? 0.0 : sum / out.rows.size();
  out.reference_delta = std::abs(out.max_fidelity - out.reference_fidelity);

  StateVector gg = StateVector::basis({2, 2}, 0);
  for (size_t k = 0; k < out.probe_offsets.size(); ++k)
    out.probe_fidelities[k] = timing_error_fidelity(out.probe_offsets[k], gg, unit, cfg.params);

  if (cfg.offset == 0.0 && std::abs(out.min_fidelity - 1.0) > kDerivedTol) out.pass = false;
  return out;
}

inline ordered_json to_json(const SweepCampaign& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows)
    rows.push_back(ordered_json{{"y_gg", row.y_gg},
                                {"y_ge", row.y_ge},
                                {"y_eg", row.y_eg},
                                {"y_ee", row.y_ee},
                                {"offset_fraction", row.offset_fraction},
                                {"fidelity", row.fidelity}});
  ordered_json probes = ordered_json::array();
  for (size_t k = 0; k < r.probe_offsets.size(); ++k)
    probes.push_back(
        ordered_json{{"offset_fraction", r.probe_offsets[k]}, {"fidelity", r.probe_fidelities[k]}});
  return ordered_json{{"command", "fidelity-sweep"},
                      {"config", detail::config_json(r.config, 0.0)},
                      {"summary",
                       {{"rows", r.rows.size()},
                        {"min_fidelity", r.min_fidelity},
                        {"max_fidelity", r.max_fidelity},
                        {"mean_fidelity", r.mean_fidelity},
                        {"reference_fidelity", r.reference_fidelity},
                        {"reference_delta", r.reference_delta},
                        {"probes", std::move(probes)}}},
                      {"rows", std::move(rows)},
                      {"pass", r.pass}};
}

inline std::string to_csv(const SweepCampaign& r) {
  std::ostringstream out;
  out << "y_gg,y_ge,y_eg,y_ee,offset_fraction,fidelity\n";
  for (const auto& row : r.rows)
    out << detail::fp(row.y_gg) << ',' << detail::fp(row.y_ge) << ',' << detail::fp(row.y_eg)
        << ',' << detail::fp(row.y_ee) << ',' << detail::fp(row.offset_fraction) << ','
        << detail::fp(row.fidelity) << '\n';
  return out.str();
}

inline std::string summary_text(const SweepCampaign& r) {
  std::ostringstream out;
  out << "fidelity-sweep: " << r.rows.size() << " rows at offset " << r.config.offset
      << ", min " << r.min_fidelity << ", max " << r.max_fidelity << ", mean " << r.mean_fidelity
      << "; |max - " << r.reference_fidelity << "| = " << r.reference_delta;
  return out.str();
}

// ---------------------------------------------------------------------------
// timing-report

struct TimingCampaign {
  RunConfig config;
  TimingReport report;
  bool pass;
};

inline TimingCampaign run_timing_report(const RunConfig& cfg) {
  cfg.validate();
  TimingCampaign out{cfg, timing_report(cfg.params), true};
  out.pass = out.report.within_radiative && out.report.within_cavity_decay;
  return out;
}

inline ordered_json to_json(const TimingCampaign& r) {
  const TimingReport& t = r.report;
  return ordered_json{
      {"command", "timing-report"},
      {"config", detail::config_json(r.config, 0.0)},
      {"summary",
       {{"cnot_stage_time_s", t.cnot_stage_time},
        {"jc_stage_time_s", t.jc_stage_time},
        {"pulse_time_s", t.pulse_time},
        {"photon_lifetime_s", t.photon_lifetime},
        {"effective_decay_time_s", t.effective_decay_time},
        {"radiative_time_s", t.radiative_time},
        {"cnot_stages", t.cnot_stages},
        {"jc_stages", t.jc_stages},
        {"pulse_stages", t.pulse_stages},
        {"total_time_s", t.total_time},
        {"radiative_ratio", t.total_time / t.radiative_time},
        {"cavity_decay_ratio", t.total_time / t.effective_decay_time},
        {"within_radiative", t.within_radiative},
        {"within_cavity_decay", t.within_cavity_decay}}},
      {"pass", r.pass}};
}

inline std::string to_csv(const TimingCampaign& r) {
  const TimingReport& t = r.report;
  std::ostringstream out;
  out << "quantity,value\n";
  out << "cnot_stage_time_s," << detail::fp(t.cnot_stage_time) << '\n';
  out << "jc_stage_time_s," << detail::fp(t.jc_stage_time) << '\n';
  out << "pulse_time_s," << detail::fp(t.pulse_time) << '\n';
  out << "photon_lifetime_s," << detail::fp(t.photon_lifetime) << '\n';
  out << "effective_decay_time_s," << detail::fp(t.effective_decay_time) << '\n';
  out << "radiative_time_s," << detail::fp(t.radiative_time) << '\n';
  out << "cnot_stages," << t.cnot_stages << '\n';
  out << "jc_stages," << t.jc_stages << '\n';
  out << "pulse_stages," << t.pulse_stages << '\n';
  out << "total_time_s," << detail::fp(t.total_time) << '\n';
  out << "within_radiative," << (t.within_radiative ? "true" : "false") << '\n';
  out << "within_cavity_decay," << (t.within_cavity_decay ? "true" : "false") << '\n';
  return out.str();
}

inline std::string summary_text(const TimingCampaign& r) {
  const TimingReport& t = r.report;
  std::ostringstream out;
  out << "timing-report: total " << t.total_time << " s vs radiative " << t.radiative_time
      << " s and cavity decay " << t.effective_decay_time << " s, "
      << (r.pass ? "pass" : "FAIL");
  return out.str();
}

}  // namespace rio
