#pragma once

#include "q2logic/scheduler.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace q2 {

// Memory-efficiency factor as a function of write-back rotation. Exact-match
// lookup, then the default row. The built-in table keeps 0.8 outside the
// 4..12 rotation band and 0.8/12 inside it; absolute values are placeholders
// meant to be calibrated from stream-bandwidth measurements.
struct AlphaTable {
    std::map<int, double> rows;
    std::optional<double> fallback;

    double at(int rotation) const;  // throws std::out_of_range when absent

    static AlphaTable builtin_default();
};

// Rows are "rotation,alpha" with 0 < alpha <= 1; a "default,alpha" row is
// allowed. '#' starts a comment. Throws std::invalid_argument on malformed
// rows or out-of-range alpha.
AlphaTable load_alpha_table(std::string_view text);
AlphaTable load_alpha_table_file(const std::string& path);

// Scheduler cost table derived from alpha: penalty(r) = best alpha / alpha(r).
PenaltyTable penalty_from_alpha(const AlphaTable& alpha);

struct PerfParams {
    double f_max_hz = 0.0;          // device clock
    double f_mem_hz = 0.0;          // peak memory clock
    double burst_load_bits = 0.0;   // B_lw, <= 2048
    double t_cfg_seconds = 0.0;     // per-bitstream configuration overhead
    AlphaTable alpha = AlphaTable::builtin_default();

    void validate() const;  // throws std::invalid_argument
};

// Parameters shaped after the DE10-Agilex platform (200 MHz fabric clock,
// DDR4-class memory clock, 2048-bit bursts).
PerfParams de10_agilex_preset();

// Data-movement term of the bitstream time:
//   8 * 2^n / (alpha(r) * min(f_mem, f_max) * (1 + B_lw/128))
// with the state occupying 8 * 2^n bytes of single-precision complex values.
double bitstream_data_seconds(const PerfParams& p, int n_qubits, int rotation);

// t_cfg plus the data term.
double bitstream_time(const PerfParams& p, int n_qubits, int rotation);

struct BitstreamEstimate {
    int index = 0;
    int rotation = 0;
    double seconds = 0.0;
    double data_seconds = 0.0;
    double bytes = 0.0;
    double bandwidth_bytes_per_s = 0.0;  // bytes / data term
    bool in_penalty_band = false;
};

struct ProgramEstimate {
    double total_seconds = 0.0;
    std::vector<BitstreamEstimate> rows;
};

ProgramEstimate program_time(const PerfParams& p, const std::vector<BitstreamPlan>& plans,
                             int n_qubits);

}  // namespace q2
