#pragma once

#include "q2logic/circuit.hpp"

#include <complex>
#include <vector>

namespace q2::oracle {

// Dense double-precision reference state; ground truth for all equivalence
// testing against the device path.
struct DenseState {
    int n_qubits = 0;
    std::vector<std::complex<double>> amplitudes;

    static DenseState zero(int n_qubits);
    double norm_squared() const;
};

// Pair update over indices differing in bit `qubit`.
void apply_unary(DenseState& state, const GateMatrix& m, int qubit);

// Same pair update restricted to indices whose control bit is 1.
void apply_controlled(DenseState& state, const GateMatrix& m, int control, int target);

// Apply a lowered circuit in program order starting from |0...0>.
DenseState run(const Circuit& circuit);

}  // namespace q2::oracle
