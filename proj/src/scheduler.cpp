#include "q2logic/scheduler.hpp"

#include <cstdlib>
#include <queue>
#include <set>

namespace q2 {

void SystemConfig::validate() const {
    if (n_qpu < 1) throw std::invalid_argument("n_qpu must be >= 1");
    if (n_sysqbits < 1) throw std::invalid_argument("n_sysqbits must be >= 1");
    if (n_qubits < 1) throw std::invalid_argument("n_qubits must be >= 1");
}

double PenaltyTable::at(int rotation) const {
    const auto it = rows.find(rotation);
    return it == rows.end() ? fallback : it->second;
}

PenaltyTable PenaltyTable::uniform() { return PenaltyTable{}; }

PenaltyTable PenaltyTable::default_table() {
    PenaltyTable table;
    for (int r = 4; r <= 12; ++r) {
        table.rows[r] = 12.0;
        table.rows[-r] = 12.0;
    }
    return table;
}

int BitstreamPlan::occupied() const {
    int count = 0;
    for (const PlanSlot& slot : slots) {
        if (!slot.is_nop()) ++count;
    }
    return count;
}

std::vector<std::uint32_t> BitstreamPlan::gate_ids() const {
    std::vector<std::uint32_t> ids;
    for (const PlanSlot& slot : slots) {
        if (!slot.is_nop()) ids.push_back(slot.gate_id);
    }
    return ids;
}

ScheduleError::ScheduleError(std::uint32_t gate_id, const std::string& message)
    : std::runtime_error(message), gate_id_(gate_id) {}

int rotation_between(int s_prev, int s_next, int n) {
    int d = ((s_next - s_prev) % n + n) % n;
    if (2 * d > n) d -= n;
    return d;
}

namespace {

bool in_window(int qubit, int window_start, int width, int n) {
    return ((qubit - window_start) % n + n) % n < width;
}

bool gate_fits(const Gate& g, int window_start, const SystemConfig& cfg) {
    const int width = cfg.window_width();
    if (!in_window(g.target, window_start, width, cfg.n_qubits)) return false;
    if (g.is_controlled() && !cfg.allow_external_control &&
        !in_window(g.control, window_start, width, cfg.n_qubits)) {
        return false;
    }
    return true;
}

// Scheduling state shared across window scoring: indeg counts unscheduled
// predecessors, ready holds schedulable ids in ascending order.
struct Frontier {
    std::vector<int> indeg;
    std::set<std::uint32_t> ready;
};

std::vector<std::uint32_t> fill_window(const Circuit& circuit, const DepDag& dag,
                                       const Frontier& frontier, int window_start,
                                       const SystemConfig& cfg) {
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> heap;
    for (std::uint32_t id : frontier.ready) {
        if (gate_fits(circuit.gates[id], window_start, cfg)) heap.push(id);
    }
    std::vector<int> indeg = frontier.indeg;
    std::vector<std::uint32_t> placed;
    while (!heap.empty() && static_cast<int>(placed.size()) < cfg.n_qpu) {
        const std::uint32_t id = heap.top();
        heap.pop();
        placed.push_back(id);
        for (std::uint32_t succ : dag.succs[id]) {
            if (--indeg[succ] == 0 && gate_fits(circuit.gates[succ], window_start, cfg)) {
                heap.push(succ);
            }
        }
    }
    return placed;
}

PlanSlot slot_for_gate(const Gate& g, int window_start, int n) {
    PlanSlot slot;
    slot.kind = g.is_controlled() ? SlotKind::controlled : SlotKind::unary;
    slot.matrix = g.matrix;
    slot.target_pos = ((g.target - window_start) % n + n) % n;
    slot.control_pos = g.is_controlled() ? ((g.control - window_start) % n + n) % n : 0;
    slot.gate_id = g.id;
    slot.label = g.label;
    return slot;
}

}  // namespace

std::vector<std::uint32_t> score_window(const Circuit& circuit, const DepDag& dag,
                                        const std::vector<bool>& done, int window_start,
                                        const SystemConfig& cfg) {
    Frontier frontier;
    frontier.indeg.assign(circuit.gates.size(), 0);
    for (std::uint32_t id = 0; id < dag.size(); ++id) {
        if (id < done.size() && done[id]) continue;
        int remaining = 0;
        for (std::uint32_t p : dag.preds[id]) {
            if (p >= done.size() || !done[p]) ++remaining;
        }
        frontier.indeg[id] = remaining;
        if (remaining == 0) frontier.ready.insert(id);
    }
    return fill_window(circuit, dag, frontier, window_start, cfg);
}

std::vector<BitstreamPlan> schedule(const Circuit& circuit, const SystemConfig& cfg,
                                    const PenaltyTable& penalty) {
    cfg.validate();
    if (circuit.n_qubits != cfg.n_qubits) {
        throw std::invalid_argument("circuit width does not match config");
    }
    const int n = cfg.n_qubits;
    const DepDag dag = build_dag(circuit);

    Frontier frontier;
    frontier.indeg.resize(circuit.gates.size());
    for (std::uint32_t id = 0; id < dag.size(); ++id) {
        frontier.indeg[id] = static_cast<int>(dag.preds[id].size());
        if (frontier.indeg[id] == 0) frontier.ready.insert(id);
    }

    std::vector<BitstreamPlan> plans;
    std::size_t scheduled = 0;
    int s_prev = 0;
    while (scheduled < circuit.gates.size()) {
        int best_s = -1;
        int best_rotation = 0;
        double best_penalty = 0.0;
        std::size_t best_count = 0;
        std::vector<std::uint32_t> best_placed;
        for (int s = 0; s < n; ++s) {
            std::vector<std::uint32_t> placed = fill_window(circuit, dag, frontier, s, cfg);
            if (placed.empty()) continue;
            const int r = rotation_between(s_prev, s, n);
            const double pen = penalty.at(r);
            bool better = false;
            if (best_s < 0) {
                better = true;
            } else {
                // count/penalty compared cross-multiplied; ties by lower
                // penalty, then smaller |r| (smaller s is implicit in scan order)
                const double lhs = static_cast<double>(placed.size()) * best_penalty;
                const double rhs = static_cast<double>(best_count) * pen;
                if (lhs > rhs) {
                    better = true;
                } else if (lhs == rhs) {
                    if (pen < best_penalty) {
                        better = true;
                    } else if (pen == best_penalty && std::abs(r) < std::abs(best_rotation)) {
                        better = true;
                    }
                }
            }
            if (better) {
                best_s = s;
                best_rotation = r;
                best_penalty = pen;
                best_count = placed.size();
                best_placed = std::move(placed);
            }
        }
        if (best_s < 0) {
            const std::uint32_t stuck = *frontier.ready.begin();
            throw ScheduleError(stuck, "gate " + std::to_string(stuck) + " (" +
                                           circuit.gates[stuck].label +
                                           ") fits no window of width " +
                                           std::to_string(cfg.window_width()));
        }

        const auto commit = [&](const std::vector<std::uint32_t>& placed) {
            for (std::uint32_t id : placed) {
                frontier.ready.erase(id);
                for (std::uint32_t succ : dag.succs[id]) {
                    if (--frontier.indeg[succ] == 0) frontier.ready.insert(succ);
                }
            }
            scheduled += placed.size();
        };
        const auto emit = [&](int window, const std::vector<std::uint32_t>& placed) {
            BitstreamPlan plan;
            plan.window_start = window;
            plan.slots.reserve(cfg.n_qpu);
            for (std::uint32_t id : placed) {
                plan.slots.push_back(slot_for_gate(circuit.gates[id], window, n));
            }
            plan.slots.resize(cfg.n_qpu);
            plans.push_back(std::move(plan));
            commit(placed);
        };

        // The rotation into the chosen window rides on the previous plan's
        // write-back. Execution starts from the canonical mapping, so moving
        // away first needs a pass at window 0 to carry the rotation; it is
        // filled with whatever fits before the frontier is re-scored.
        if (plans.empty() && best_s != 0) {
            emit(0, fill_window(circuit, dag, frontier, 0, cfg));
            s_prev = 0;
            continue;
        }
        if (!plans.empty()) plans.back().rotation_out = best_rotation;
        emit(best_s, best_placed);
        s_prev = best_s;
    }
    if (!plans.empty()) {
        plans.back().rotation_out = rotation_between(s_prev, 0, n);
    }
    return plans;
}

UtilizationReport utilization_report(const std::vector<BitstreamPlan>& plans,
                                     const SystemConfig& cfg, const PenaltyTable& penalty) {
    UtilizationReport report;
    double sum = 0.0;
    for (std::size_t i = 0; i < plans.size(); ++i) {
        UtilizationRecord rec;
        rec.index = static_cast<int>(i);
        rec.window_start = plans[i].window_start;
        rec.rotation = plans[i].rotation_out;
        rec.occupied = plans[i].occupied();
        rec.utilization = static_cast<double>(rec.occupied) / cfg.n_qpu;
        rec.relative_cost = penalty.at(rec.rotation);
        sum += rec.utilization;
        report.rows.push_back(rec);
    }
    report.mean_utilization = plans.empty() ? 0.0 : sum / static_cast<double>(plans.size());
    return report;
}

}  // namespace q2
