#include "q2logic/oracle.hpp"
#include "q2logic/qasm.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

// Structural and semantic facts about the checked-in benchmark circuits.

using namespace q2;

namespace {

Circuit load_lowered(const std::string& name, std::vector<Diagnostic>* warnings = nullptr) {
    return lower(parse_qasm_file(std::string(Q2L_CIRCUITS_DIR) + "/" + name, warnings));
}

}  // namespace

TEST_CASE("qft_n27 lowers to 1782 gates with 702 CNOTs") {
    const Circuit c = load_lowered("qft_n27.qasm");
    CHECK(c.n_qubits == 27);
    CHECK(c.gates.size() == 1782);
    CHECK(c.cnot_like_count() == 702);
}

TEST_CASE("adder_n28 parses at width 28 and lowers deterministically") {
    std::vector<Diagnostic> warnings;
    const Circuit c = load_lowered("adder_n28.qasm", &warnings);
    CHECK(c.n_qubits == 28);
    // counts of this corpus revision under the 15-gate ccx decomposition
    CHECK(c.gates.size() == 445);
    CHECK(c.cnot_like_count() == 209);
    // one warning per dropped measurement
    CHECK(warnings.size() == 14);
    for (const Gate& g : c.gates) {
        CHECK((g.kind == GateKind::unary || g.kind == GateKind::controlled));
    }
}

TEST_CASE("ripple-carry adder computes 1 + 1 on basis states") {
    // cin=0, a=1, b=1: b picks up the sum 2 (bit 1 of register b = qubit 6)
    const Circuit c = load_lowered("adder_n10.qasm");
    const oracle::DenseState s = oracle::run(c);
    CHECK(std::abs(s.amplitudes[(1u << 1) | (1u << 6)] - cdouble{1.0, 0.0}) < 1e-9);
}

TEST_CASE("wstate circuits spread amplitude equally over one-hot states") {
    for (const auto [file, n] : {std::pair<const char*, int>{"wstate_n8.qasm", 8},
                                 {"wstate_n16.qasm", 16}}) {
        const Circuit c = load_lowered(file);
        const oracle::DenseState s = oracle::run(c);
        const double want = 1.0 / std::sqrt(static_cast<double>(n));
        for (std::uint64_t i = 0; i < s.amplitudes.size(); ++i) {
            const bool one_hot = i != 0 && (i & (i - 1)) == 0;
            if (one_hot) {
                CHECK(std::abs(s.amplitudes[i] - cdouble{want, 0.0}) < 1e-9);
            } else {
                CHECK(std::abs(s.amplitudes[i]) < 1e-9);
            }
        }
    }
}

TEST_CASE("qft_n8 with cu1 and swap agrees with the full-matrix evaluation") {
    const SourceCircuit src =
        parse_qasm_file(std::string(Q2L_CIRCUITS_DIR) + "/qft_n8.qasm");
    const std::vector<cdouble> ref = test::dense_eval_source(src);
    const oracle::DenseState got = oracle::run(lower(src));
    CHECK(test::linf(ref, got.amplitudes) < 1e-9);
}

TEST_CASE("the pre-decomposed controlled-phase dialect matches cu1") {
    // qft_n27 spells cu1(l) as u1(l/2) c; cx c,t; u1(-l/2) t; cx c,t; u1(l/2) t
    for (const double lambda : {0.1, -1.3, 3.14159 / 4}) {
        const std::string prep = "OPENQASM 2.0; qreg q[2]; h q[0]; h q[1]; ";
        const std::string lam = std::to_string(lambda);
        const SourceCircuit direct = parse_qasm(prep + "cu1(" + lam + ") q[1],q[0];");
        const SourceCircuit spelled = parse_qasm(
            prep + "u1(" + lam + "/2) q[1]; cx q[1],q[0]; u1(-" + lam +
            "/2) q[0]; cx q[1],q[0]; u1(" + lam + "/2) q[0];");
        const oracle::DenseState a = oracle::run(lower(direct));
        const oracle::DenseState b = oracle::run(lower(spelled));
        for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
            CHECK(std::abs(a.amplitudes[i] - b.amplitudes[i]) < 1e-12);
        }
    }
}

TEST_CASE("cat_state_n16 is one Hadamard and a CNOT chain") {
    const Circuit c = load_lowered("cat_state_n16.qasm");
    CHECK(c.gates.size() == 16);
    CHECK(c.cnot_like_count() == 15);
}

TEST_CASE("vqc_n27 is dense and neighbor-coupled") {
    const Circuit c = load_lowered("vqc_n27.qasm");
    CHECK(c.n_qubits == 27);
    CHECK(c.gates.size() == 1654);
    CHECK(c.cnot_like_count() == 520);
    for (const Gate& g : c.gates) {
        if (g.is_controlled()) CHECK(std::abs(g.control - g.target) == 1);
    }
}
