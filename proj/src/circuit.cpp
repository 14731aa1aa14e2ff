#include "q2logic/circuit.hpp"

#include <sstream>

namespace q2 {

std::size_t Circuit::cnot_like_count() const {
    std::size_t count = 0;
    for (const Gate& g : gates) {
        if (g.is_controlled()) ++count;
    }
    return count;
}

DepDag build_dag(const Circuit& circuit) {
    DepDag dag;
    dag.preds.resize(circuit.gates.size());
    dag.succs.resize(circuit.gates.size());

    // last gate id seen on each qubit, -1 when untouched
    std::vector<std::int64_t> last(circuit.n_qubits, -1);
    for (const Gate& g : circuit.gates) {
        auto link = [&](int qubit) {
            const std::int64_t p = last[qubit];
            if (p < 0) return;
            auto& preds = dag.preds[g.id];
            const auto pid = static_cast<std::uint32_t>(p);
            for (std::uint32_t existing : preds) {
                if (existing == pid) return;  // duplicates merged
            }
            preds.push_back(pid);
            dag.succs[pid].push_back(g.id);
        };
        link(g.target);
        if (g.is_controlled()) link(g.control);
        last[g.target] = g.id;
        if (g.is_controlled()) last[g.control] = g.id;
    }
    return dag;
}

std::vector<std::uint32_t> ready_frontier(const DepDag& dag, const std::vector<bool>& done) {
    std::vector<std::uint32_t> ready;
    for (std::uint32_t id = 0; id < dag.size(); ++id) {
        if (id < done.size() && done[id]) continue;
        bool all_done = true;
        for (std::uint32_t p : dag.preds[id]) {
            if (p >= done.size() || !done[p]) {
                all_done = false;
                break;
            }
        }
        if (all_done) ready.push_back(id);
    }
    return ready;
}

std::string to_dot(const Circuit& circuit, const DepDag& dag) {
    std::ostringstream out;
    out << "digraph circuit {\n";
    out << "  rankdir=LR;\n";
    for (const Gate& g : circuit.gates) {
        out << "  g" << g.id << " [label=\"" << g.id << ": " << g.label << "\"];\n";
    }
    for (std::uint32_t id = 0; id < dag.size(); ++id) {
        for (std::uint32_t p : dag.preds[id]) {
            out << "  g" << p << " -> g" << id << ";\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace q2
