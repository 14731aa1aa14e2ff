#include "q2logic/oracle.hpp"

#include <stdexcept>

namespace q2::oracle {

DenseState DenseState::zero(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 30) {
        throw std::invalid_argument("oracle qubit count out of range: " +
                                    std::to_string(n_qubits));
    }
    DenseState state;
    state.n_qubits = n_qubits;
    state.amplitudes.assign(std::size_t{1} << n_qubits, {0.0, 0.0});
    state.amplitudes[0] = {1.0, 0.0};
    return state;
}

double DenseState::norm_squared() const {
    double sum = 0.0;
    for (const auto& a : amplitudes) sum += std::norm(a);
    return sum;
}

void apply_unary(DenseState& state, const GateMatrix& m, int qubit) {
    if (qubit < 0 || qubit >= state.n_qubits) {
        throw std::invalid_argument("qubit out of range: " + std::to_string(qubit));
    }
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    const std::uint64_t size = state.amplitudes.size();
    for (std::uint64_t base = 0; base < size; base += 2 * bit) {
        for (std::uint64_t off = 0; off < bit; ++off) {
            const std::uint64_t i = base + off;
            const std::uint64_t j = i | bit;
            const auto a = state.amplitudes[i];
            const auto b = state.amplitudes[j];
            state.amplitudes[i] = m.m00 * a + m.m01 * b;
            state.amplitudes[j] = m.m10 * a + m.m11 * b;
        }
    }
}

void apply_controlled(DenseState& state, const GateMatrix& m, int control, int target) {
    if (control == target) {
        throw std::invalid_argument("control and target must differ");
    }
    if (control < 0 || control >= state.n_qubits || target < 0 || target >= state.n_qubits) {
        throw std::invalid_argument("qubit out of range");
    }
    const std::uint64_t tbit = std::uint64_t{1} << target;
    const std::uint64_t cbit = std::uint64_t{1} << control;
    const std::uint64_t size = state.amplitudes.size();
    for (std::uint64_t base = 0; base < size; base += 2 * tbit) {
        for (std::uint64_t off = 0; off < tbit; ++off) {
            const std::uint64_t i = base + off;
            if (!(i & cbit)) continue;
            const std::uint64_t j = i | tbit;
            const auto a = state.amplitudes[i];
            const auto b = state.amplitudes[j];
            state.amplitudes[i] = m.m00 * a + m.m01 * b;
            state.amplitudes[j] = m.m10 * a + m.m11 * b;
        }
    }
}

DenseState run(const Circuit& circuit) {
    DenseState state = DenseState::zero(circuit.n_qubits);
    for (const Gate& g : circuit.gates) {
        if (g.is_controlled()) {
            apply_controlled(state, g.matrix, g.control, g.target);
        } else {
            apply_unary(state, g.matrix, g.target);
        }
    }
    return state;
}

}  // namespace q2::oracle
