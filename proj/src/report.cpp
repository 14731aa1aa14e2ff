#include "q2logic/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace q2 {

namespace {

ordered_json matrix_json(const GateMatrix& m) {
    return ordered_json::array({
        ordered_json::array({m.m00.real(), m.m00.imag()}),
        ordered_json::array({m.m01.real(), m.m01.imag()}),
        ordered_json::array({m.m10.real(), m.m10.imag()}),
        ordered_json::array({m.m11.real(), m.m11.imag()}),
    });
}

GateMatrix matrix_from_json(const ordered_json& j) {
    if (!j.is_array() || j.size() != 4) {
        throw std::invalid_argument("gate table matrix must have 4 entries");
    }
    auto entry = [&](std::size_t i) {
        return cdouble{j[i][0].get<double>(), j[i][1].get<double>()};
    };
    return GateMatrix{entry(0), entry(1), entry(2), entry(3)};
}

ordered_json utilization_rows_json(const UtilizationReport& util) {
    ordered_json rows = ordered_json::array();
    for (const UtilizationRecord& rec : util.rows) {
        rows.push_back({
            {"index", rec.index},
            {"window_start", rec.window_start},
            {"rotation", rec.rotation},
            {"occupied", rec.occupied},
            {"utilization", rec.utilization},
            {"relative_cost", rec.relative_cost},
        });
    }
    return rows;
}

ordered_json verification_json(const VerificationResult& v) {
    return {
        {"max_linf", v.max_linf},
        {"tolerance", v.tolerance},
        {"norm", v.norm},
        {"pass", v.pass},
    };
}

ordered_json estimate_rows_json(const ProgramEstimate& estimate) {
    ordered_json rows = ordered_json::array();
    for (const BitstreamEstimate& row : estimate.rows) {
        rows.push_back({
            {"index", row.index},
            {"rotation", row.rotation},
            {"seconds", row.seconds},
            {"data_seconds", row.data_seconds},
            {"bytes", row.bytes},
            {"bandwidth_bytes_per_s", row.bandwidth_bytes_per_s},
            {"in_penalty_band", row.in_penalty_band},
        });
    }
    return rows;
}

}  // namespace

ordered_json gate_table_json(const Circuit& circuit) {
    ordered_json gates = ordered_json::array();
    for (const Gate& g : circuit.gates) {
        ordered_json entry = {
            {"id", g.id},
            {"kind", g.is_controlled() ? "controlled" : "unary"},
            {"target", g.target},
            {"control", g.is_controlled() ? ordered_json(g.control) : ordered_json(nullptr)},
            {"matrix", matrix_json(g.matrix)},
            {"label", g.label},
        };
        gates.push_back(std::move(entry));
    }
    return {
        {"n_qubits", circuit.n_qubits},
        {"gates", std::move(gates)},
    };
}

Circuit circuit_from_gate_table(const ordered_json& table) {
    Circuit circuit;
    circuit.n_qubits = table.at("n_qubits").get<int>();
    const auto& gates = table.at("gates");
    for (const auto& entry : gates) {
        Gate g;
        g.id = entry.at("id").get<std::uint32_t>();
        const std::string kind = entry.at("kind").get<std::string>();
        g.kind = kind == "controlled" ? GateKind::controlled : GateKind::unary;
        g.target = entry.at("target").get<int>();
        g.control = entry.at("control").is_null() ? -1 : entry.at("control").get<int>();
        g.matrix = matrix_from_json(entry.at("matrix"));
        g.label = entry.value("label", std::string{});
        if (g.id != circuit.gates.size()) {
            throw std::invalid_argument("gate table ids must be dense and ordered");
        }
        circuit.gates.push_back(std::move(g));
    }
    return circuit;
}

ordered_json compile_report_json(const std::string& circuit_name, const Circuit& circuit,
                                 const SystemConfig& cfg,
                                 const std::vector<BitstreamPlan>& plans,
                                 const PenaltyTable& penalty) {
    const UtilizationReport util = utilization_report(plans, cfg, penalty);
    return {
        {"circuit", circuit_name},
        {"n_qubits", circuit.n_qubits},
        {"gate_count", circuit.gates.size()},
        {"cnot_count", circuit.cnot_like_count()},
        {"config",
         {{"n_qpu", cfg.n_qpu},
          {"n_sysqbits", cfg.n_sysqbits},
          {"allow_external_control", cfg.allow_external_control}}},
        {"bitstream_count", plans.size()},
        {"mean_utilization", util.mean_utilization},
        {"bitstreams", utilization_rows_json(util)},
    };
}

ordered_json simulate_report_json(const SystemConfig& cfg, const StateVector& state,
                                  std::size_t bitstream_count,
                                  const std::optional<VerificationResult>& verify) {
    ordered_json out = {
        {"n_qubits", cfg.n_qubits},
        {"config", {{"n_qpu", cfg.n_qpu}, {"n_sysqbits", cfg.n_sysqbits}}},
        {"bitstream_count", bitstream_count},
        {"norm", state.norm_squared()},
        {"top_amplitudes", top_amplitudes_json(state, 8)},
    };
    if (verify) out["verify"] = verification_json(*verify);
    return out;
}

ordered_json estimate_report_json(const PerfParams& params, const ProgramEstimate& estimate) {
    return {
        {"params",
         {{"f_max_hz", params.f_max_hz},
          {"f_mem_hz", params.f_mem_hz},
          {"burst_load_bits", params.burst_load_bits},
          {"t_cfg_seconds", params.t_cfg_seconds}}},
        {"bitstream_count", estimate.rows.size()},
        {"total_seconds", estimate.total_seconds},
        {"bitstreams", estimate_rows_json(estimate)},
    };
}

ordered_json run_report_json(const std::string& circuit_name, const Circuit& circuit,
                             const SystemConfig& cfg, const std::vector<BitstreamPlan>& plans,
                             const PenaltyTable& penalty,
                             const std::optional<ProgramEstimate>& estimate,
                             const std::optional<VerificationResult>& verify) {
    ordered_json out = compile_report_json(circuit_name, circuit, cfg, plans, penalty);
    if (estimate) {
        out["total_seconds"] = estimate->total_seconds;
        out["timing"] = estimate_rows_json(*estimate);
    }
    if (verify) out["verification"] = verification_json(*verify);
    return out;
}

std::string bitstream_csv(const std::vector<BitstreamPlan>& plans, const SystemConfig& cfg,
                          const PenaltyTable& penalty,
                          const std::optional<ProgramEstimate>& estimate) {
    const UtilizationReport util = utilization_report(plans, cfg, penalty);
    std::ostringstream out;
    out << "index,window_start,rotation,occupied,utilization,relative_cost";
    if (estimate) out << ",seconds,bandwidth_bytes_per_s";
    out << "\n";
    for (std::size_t i = 0; i < util.rows.size(); ++i) {
        const UtilizationRecord& rec = util.rows[i];
        out << rec.index << "," << rec.window_start << "," << rec.rotation << ","
            << rec.occupied << "," << rec.utilization << "," << rec.relative_cost;
        if (estimate) {
            out << "," << estimate->rows[i].seconds << ","
                << estimate->rows[i].bandwidth_bytes_per_s;
        }
        out << "\n";
    }
    return out.str();
}

ordered_json top_amplitudes_json(const StateVector& state, std::size_t count) {
    std::vector<std::uint64_t> indices;
    indices.reserve(state.amplitudes.size());
    for (std::uint64_t i = 0; i < state.amplitudes.size(); ++i) indices.push_back(i);
    const auto magnitude = [&](std::uint64_t i) {
        return std::norm(state.amplitudes[i]);
    };
    count = std::min(count, indices.size());
    std::partial_sort(indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(count),
                      indices.end(), [&](std::uint64_t a, std::uint64_t b) {
                          const double ma = magnitude(a), mb = magnitude(b);
                          return ma > mb || (ma == mb && a < b);
                      });
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t idx = indices[i];
        const cfloat a = state.amplitudes[idx];
        rows.push_back({
            {"index", idx},
            {"re", a.real()},
            {"im", a.imag()},
            {"magnitude", std::abs(a)},
        });
    }
    return rows;
}

}  // namespace q2
