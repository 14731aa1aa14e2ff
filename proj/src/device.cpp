#include "q2logic/device.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace q2 {

double StateVector::norm_squared() const {
    double sum = 0.0;
    for (const cfloat& a : amplitudes) {
        sum += static_cast<double>(a.real()) * a.real() +
               static_cast<double>(a.imag()) * a.imag();
    }
    return sum;
}

StateVector init_state(int n_qubits, int max_qubits) {
    if (n_qubits < 1 || n_qubits > max_qubits) {
        throw std::invalid_argument("qubit count " + std::to_string(n_qubits) +
                                    " outside [1, " + std::to_string(max_qubits) + "]");
    }
    StateVector state;
    state.n_qubits = n_qubits;
    state.window_start = 0;
    state.amplitudes.assign(std::size_t{1} << n_qubits, {0.0f, 0.0f});
    state.amplitudes[0] = {1.0f, 0.0f};
    return state;
}

std::uint64_t writer_rotate_index(std::uint64_t addr, int rotation, int n_bits) {
    const int r = ((rotation % n_bits) + n_bits) % n_bits;
    if (r == 0) return addr;
    const std::uint64_t mask = (std::uint64_t{1} << n_bits) - 1;
    return ((addr >> r) | (addr << (n_bits - r))) & mask;
}

void qpu_apply(std::span<const cfloat> in, std::span<cfloat> out, const PlanSlot& slot,
               std::uint64_t chunk_index, int chunk_bits, int n_qubits) {
    const std::uint64_t chunk = std::uint64_t{1} << chunk_bits;
    if (in.size() != chunk || out.size() != chunk) {
        throw std::invalid_argument("chunk size mismatch");
    }
    if (slot.is_nop()) {
        std::copy(in.begin(), in.end(), out.begin());
        return;
    }
    if (slot.target_pos >= chunk_bits) {
        throw std::invalid_argument("target position " + std::to_string(slot.target_pos) +
                                    " not addressable in a 2^" + std::to_string(chunk_bits) +
                                    " chunk");
    }

    const cfloat m00(static_cast<float>(slot.matrix.m00.real()),
                     static_cast<float>(slot.matrix.m00.imag()));
    const cfloat m01(static_cast<float>(slot.matrix.m01.real()),
                     static_cast<float>(slot.matrix.m01.imag()));
    const cfloat m10(static_cast<float>(slot.matrix.m10.real()),
                     static_cast<float>(slot.matrix.m10.imag()));
    const cfloat m11(static_cast<float>(slot.matrix.m11.real()),
                     static_cast<float>(slot.matrix.m11.imag()));

    const std::uint64_t tbit = std::uint64_t{1} << slot.target_pos;
    for (std::uint64_t base = 0; base < chunk; base += 2 * tbit) {
        for (std::uint64_t off = 0; off < tbit; ++off) {
            const std::uint64_t a = base + off;
            const std::uint64_t b = a | tbit;
            const cfloat va = in[a];
            const cfloat vb = in[b];
            out[a] = m00 * va + m01 * vb;
            out[b] = m10 * va + m11 * vb;
        }
    }

    if (slot.kind == SlotKind::controlled) {
        const int c = slot.control_pos;
        if (c >= n_qubits) {
            throw std::invalid_argument("control position out of range");
        }
        if (c >= chunk_bits) {
            // control bit lives in the chunk index: the mux gates the whole chunk
            if (!((chunk_index >> (c - chunk_bits)) & 1)) {
                std::copy(in.begin(), in.end(), out.begin());
            }
        } else {
            const std::uint64_t cbit = std::uint64_t{1} << c;
            for (std::uint64_t x = 0; x < chunk; ++x) {
                if (!(x & cbit)) out[x] = in[x];
            }
        }
    }
}

void process_chunk(std::span<const cfloat> state_in, std::span<cfloat> state_out,
                   const BitstreamPlan& plan, std::uint64_t chunk_index, int chunk_bits,
                   int n_qubits) {
    const std::uint64_t chunk = std::uint64_t{1} << chunk_bits;
    std::vector<cfloat> buf_a(chunk);
    std::vector<cfloat> buf_b(chunk);
    const std::uint64_t base = chunk_index << chunk_bits;
    const auto src = state_in.begin() + static_cast<std::ptrdiff_t>(base);
    std::copy(src, src + static_cast<std::ptrdiff_t>(chunk), buf_a.begin());
    for (const PlanSlot& slot : plan.slots) {
        qpu_apply(buf_a, buf_b, slot, chunk_index, chunk_bits, n_qubits);
        std::swap(buf_a, buf_b);
    }
    for (std::uint64_t x = 0; x < chunk; ++x) {
        state_out[writer_rotate_index(base + x, plan.rotation_out, n_qubits)] = buf_a[x];
    }
}

void run_bitstream(StateVector& state, const BitstreamPlan& plan, const SystemConfig& cfg,
                   const RunOptions& options) {
    if (state.n_qubits != cfg.n_qubits) {
        throw std::invalid_argument("state width does not match config");
    }
    if (std::size_t{1} << state.n_qubits != state.amplitudes.size()) {
        throw std::invalid_argument("state length is not 2^n");
    }
    const int chunk_bits = cfg.window_width();
    const std::uint64_t n_chunks = std::uint64_t{1} << (state.n_qubits - chunk_bits);

    std::vector<cfloat> dest(state.amplitudes.size());
    int workers = std::max(1, options.threads);
    workers = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), n_chunks));

    if (workers == 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) {
            process_chunk(state.amplitudes, dest, plan, c, chunk_bits, state.n_qubits);
        }
    } else {
        // chunks are disjoint work units; rotated writes never collide
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t c = w; c < n_chunks; c += workers) {
                    process_chunk(state.amplitudes, dest, plan, c, chunk_bits, state.n_qubits);
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }

    state.amplitudes.swap(dest);
    state.window_start =
        ((state.window_start + plan.rotation_out) % state.n_qubits + state.n_qubits) %
        state.n_qubits;
}

void run_program(StateVector& state, const std::vector<BitstreamPlan>& plans,
                 const SystemConfig& cfg, const RunOptions& options) {
    for (const BitstreamPlan& plan : plans) {
        run_bitstream(state, plan, cfg, options);
    }
}

void canonicalize(StateVector& state) {
    if (state.window_start == 0) return;
    std::vector<cfloat> dest(state.amplitudes.size());
    const int r = -state.window_start;
    for (std::uint64_t addr = 0; addr < state.amplitudes.size(); ++addr) {
        dest[writer_rotate_index(addr, r, state.n_qubits)] = state.amplitudes[addr];
    }
    state.amplitudes.swap(dest);
    state.window_start = 0;
}

}  // namespace q2
