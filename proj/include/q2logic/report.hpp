#pragma once

#include "q2logic/circuit.hpp"
#include "q2logic/device.hpp"
#include "q2logic/perf.hpp"
#include "q2logic/scheduler.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace q2 {

using ordered_json = nlohmann::ordered_json;

// Sidecar gate table emitted beside .q2l files so a simulation run can
// rebuild the logical circuit for verification. Matrices stay in double
// precision.
ordered_json gate_table_json(const Circuit& circuit);
Circuit circuit_from_gate_table(const ordered_json& table);

struct VerificationResult {
    double max_linf = 0.0;
    double tolerance = 0.0;
    double norm = 0.0;
    bool pass = false;
};

ordered_json compile_report_json(const std::string& circuit_name, const Circuit& circuit,
                                 const SystemConfig& cfg,
                                 const std::vector<BitstreamPlan>& plans,
                                 const PenaltyTable& penalty);

ordered_json simulate_report_json(const SystemConfig& cfg, const StateVector& state,
                                  std::size_t bitstream_count,
                                  const std::optional<VerificationResult>& verify);

ordered_json estimate_report_json(const PerfParams& params, const ProgramEstimate& estimate);

// Full pipeline view: scheduling, utilization, timing and verification.
ordered_json run_report_json(const std::string& circuit_name, const Circuit& circuit,
                             const SystemConfig& cfg, const std::vector<BitstreamPlan>& plans,
                             const PenaltyTable& penalty,
                             const std::optional<ProgramEstimate>& estimate,
                             const std::optional<VerificationResult>& verify);

// One row per bitstream; timing columns appear when an estimate is given.
std::string bitstream_csv(const std::vector<BitstreamPlan>& plans, const SystemConfig& cfg,
                          const PenaltyTable& penalty,
                          const std::optional<ProgramEstimate>& estimate);

// Top `count` amplitudes by magnitude, index-ascending among equals.
ordered_json top_amplitudes_json(const StateVector& state, std::size_t count);

}  // namespace q2
