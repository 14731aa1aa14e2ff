#include "q2logic/perf.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace q2 {

double AlphaTable::at(int rotation) const {
    const auto it = rows.find(rotation);
    if (it != rows.end()) return it->second;
    if (fallback) return *fallback;
    throw std::out_of_range("no alpha entry for rotation " + std::to_string(rotation) +
                            " and no default row");
}

AlphaTable AlphaTable::builtin_default() {
    AlphaTable table;
    table.fallback = 0.8;
    for (int r = 4; r <= 12; ++r) {
        table.rows[r] = 0.8 / 12.0;
        table.rows[-r] = 0.8 / 12.0;
    }
    return table;
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

AlphaTable load_alpha_table(std::string_view text) {
    AlphaTable table;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("alpha table line " + std::to_string(line_no) +
                                        ": expected 'rotation,alpha'");
        }
        const std::string key = trim(line.substr(0, comma));
        const std::string value = trim(line.substr(comma + 1));
        double alpha = 0.0;
        try {
            std::size_t used = 0;
            alpha = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument("alpha table line " + std::to_string(line_no) +
                                        ": bad alpha value '" + value + "'");
        }
        if (!(alpha > 0.0 && alpha <= 1.0)) {
            throw std::invalid_argument("alpha table line " + std::to_string(line_no) +
                                        ": alpha must be in (0, 1]");
        }
        if (key == "default") {
            table.fallback = alpha;
            continue;
        }
        int rotation = 0;
        try {
            std::size_t used = 0;
            rotation = std::stoi(key, &used);
            if (used != key.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument("alpha table line " + std::to_string(line_no) +
                                        ": bad rotation '" + key + "'");
        }
        table.rows[rotation] = alpha;
    }
    return table;
}

AlphaTable load_alpha_table_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_alpha_table(buf.str());
}

PenaltyTable penalty_from_alpha(const AlphaTable& alpha) {
    double best = alpha.fallback.value_or(0.0);
    for (const auto& [r, a] : alpha.rows) best = std::max(best, a);
    if (best <= 0.0) throw std::invalid_argument("alpha table has no positive entries");
    PenaltyTable penalty;
    for (const auto& [r, a] : alpha.rows) penalty.rows[r] = best / a;
    penalty.fallback = alpha.fallback ? best / *alpha.fallback
                                      : 1e9;  // effectively forbid unlisted rotations
    return penalty;
}

void PerfParams::validate() const {
    if (f_max_hz <= 0.0) throw std::invalid_argument("f_max must be positive");
    if (f_mem_hz <= 0.0) throw std::invalid_argument("f_mem must be positive");
    if (burst_load_bits <= 0.0 || burst_load_bits > 2048.0) {
        throw std::invalid_argument("burst load width must be in (0, 2048] bits");
    }
    if (t_cfg_seconds < 0.0) throw std::invalid_argument("t_cfg must be non-negative");
    for (const auto& [r, a] : alpha.rows) {
        if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("alpha out of range");
    }
    if (alpha.fallback && !(*alpha.fallback > 0.0 && *alpha.fallback <= 1.0)) {
        throw std::invalid_argument("alpha default out of range");
    }
}

PerfParams de10_agilex_preset() {
    PerfParams p;
    p.f_max_hz = 200e6;
    p.f_mem_hz = 1.2e9;
    p.burst_load_bits = 2048.0;
    p.t_cfg_seconds = 1e-5;
    p.alpha = AlphaTable::builtin_default();
    return p;
}

double bitstream_data_seconds(const PerfParams& p, int n_qubits, int rotation) {
    const double bytes = std::ldexp(8.0, n_qubits);  // 8 * 2^n
    const double denom =
        p.alpha.at(rotation) * std::min(p.f_mem_hz, p.f_max_hz) * (1.0 + p.burst_load_bits / 128.0);
    return bytes / denom;
}

double bitstream_time(const PerfParams& p, int n_qubits, int rotation) {
    return p.t_cfg_seconds + bitstream_data_seconds(p, n_qubits, rotation);
}

ProgramEstimate program_time(const PerfParams& p, const std::vector<BitstreamPlan>& plans,
                             int n_qubits) {
    ProgramEstimate estimate;
    for (std::size_t i = 0; i < plans.size(); ++i) {
        BitstreamEstimate row;
        row.index = static_cast<int>(i);
        row.rotation = plans[i].rotation_out;
        row.data_seconds = bitstream_data_seconds(p, n_qubits, row.rotation);
        row.seconds = p.t_cfg_seconds + row.data_seconds;
        row.bytes = std::ldexp(8.0, n_qubits);
        row.bandwidth_bytes_per_s = row.bytes / row.data_seconds;
        row.in_penalty_band = in_rotation_penalty_band(row.rotation);
        estimate.total_seconds += row.seconds;
        estimate.rows.push_back(row);
    }
    return estimate;
}

}  // namespace q2
