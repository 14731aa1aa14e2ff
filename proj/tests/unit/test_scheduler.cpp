#include "q2logic/scheduler.hpp"

#include "q2logic/qasm.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

using namespace q2;

namespace {

Circuit load_circuit(const std::string& name) {
    return lower(parse_qasm_file(std::string(Q2L_CIRCUITS_DIR) + "/" + name));
}

Circuit fragment() { return load_circuit("adder_fragment_n4.qasm"); }

// plans must schedule every gate once, in topological order, with in-range
// positions and rotations
void check_validity(const Circuit& circuit, const std::vector<BitstreamPlan>& plans,
                    const SystemConfig& cfg) {
    const DepDag dag = build_dag(circuit);
    std::vector<bool> seen(circuit.gates.size(), false);
    std::size_t total = 0;
    for (const BitstreamPlan& plan : plans) {
        REQUIRE(plan.slots.size() == static_cast<std::size_t>(cfg.n_qpu));
        CHECK(plan.rotation_out > -cfg.n_qubits);
        CHECK(plan.rotation_out < cfg.n_qubits);
        CHECK(plan.window_start >= 0);
        CHECK(plan.window_start < cfg.n_qubits);
        for (const PlanSlot& slot : plan.slots) {
            if (slot.is_nop()) continue;
            ++total;
            REQUIRE(slot.gate_id < circuit.gates.size());
            CHECK(!seen[slot.gate_id]);
            seen[slot.gate_id] = true;
            CHECK(slot.target_pos < cfg.window_width());
            if (slot.kind == SlotKind::controlled && !cfg.allow_external_control) {
                CHECK(slot.control_pos < cfg.window_width());
            }
            // positions agree with the window mapping
            const Gate& g = circuit.gates[slot.gate_id];
            const int n = cfg.n_qubits;
            CHECK(slot.target_pos == ((g.target - plan.window_start) % n + n) % n);
        }
    }
    CHECK(total == circuit.gates.size());

    // concatenated order is topological
    std::vector<bool> done(circuit.gates.size(), false);
    for (const BitstreamPlan& plan : plans) {
        for (std::uint32_t id : plan.gate_ids()) {
            for (std::uint32_t p : dag.preds[id]) CHECK(done[p]);
            done[id] = true;
        }
    }

    // rotations chain: cumulative rotation from 0 reaches each window start
    // and returns to canonical at the end
    int s = 0;
    for (const BitstreamPlan& plan : plans) {
        CHECK(plan.window_start == s);
        s = ((s + plan.rotation_out) % cfg.n_qubits + cfg.n_qubits) % cfg.n_qubits;
    }
    if (!plans.empty()) CHECK(s == 0);
}

}  // namespace

TEST_CASE("rotation_between worked values") {
    CHECK(rotation_between(0, 2, 4) == 2);
    CHECK(rotation_between(2, 1, 4) == -1);
    CHECK(rotation_between(3, 3, 8) == 0);
}

TEST_CASE("rotation_between stays minimal and consistent") {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 2000; ++iter) {
        const int n = 1 + static_cast<int>(rng() % 24);
        const int a = static_cast<int>(rng() % n);
        const int b = static_cast<int>(rng() % n);
        const int r = rotation_between(a, b, n);
        CHECK(2 * r <= n);
        CHECK(2 * r > -n);
        CHECK(((a + r) % n + n) % n == b);
    }
}

TEST_CASE("score_window reproduces the first adder bitstream") {
    const Circuit c = fragment();
    const DepDag dag = build_dag(c);
    const SystemConfig cfg{4, 2, 4};
    std::vector<bool> done(c.gates.size(), false);

    // qubits 0-1: the two inversions then the two T gates fill every slot
    const auto s0 = score_window(c, dag, done, 0, cfg);
    CHECK(s0 == std::vector<std::uint32_t>{0, 1, 4, 5});

    // qubits 2-3: the Hadamard then the CNOT lead the placement
    const auto s2 = score_window(c, dag, done, 2, cfg);
    REQUIRE(s2.size() == 4);
    CHECK(s2[0] == 2);
    CHECK(c.gates[s2[0]].label == "h q[3]");
    CHECK(c.gates[s2[1]].label == "cx q[3],q[2]");
}

TEST_CASE("score_window with everything done is empty") {
    const Circuit c = fragment();
    const DepDag dag = build_dag(c);
    std::vector<bool> done(c.gates.size(), true);
    CHECK(score_window(c, dag, done, 0, SystemConfig{4, 2, 4}).empty());
}

TEST_CASE("adder fragment schedule matches the narrated windows and rotations") {
    const Circuit c = fragment();
    const SystemConfig cfg{4, 2, 4};
    const auto plans = schedule(c, cfg);
    REQUIRE(plans.size() == 4);

    CHECK(plans[0].window_start == 0);
    CHECK(plans[0].gate_ids() == std::vector<std::uint32_t>{0, 1, 4, 5});
    CHECK(plans[0].occupied() == 4);
    CHECK(plans[0].rotation_out == 2);

    CHECK(plans[1].window_start == 2);
    CHECK(plans[1].rotation_out == -1);

    CHECK(plans[2].window_start == 1);
    check_validity(c, plans, cfg);
}

TEST_CASE("single-qubit circuit with one slot gives one plan per gate") {
    SourceCircuit src;
    src.n_qubits = 1;
    for (int i = 0; i < 10; ++i) src.statements.push_back({"h", {}, {0}, 0, 0});
    const Circuit c = lower(src);
    const SystemConfig cfg{1, 1, 1};
    const auto plans = schedule(c, cfg);
    REQUIRE(plans.size() == 10);
    for (const auto& p : plans) {
        CHECK(p.occupied() == 1);
        CHECK(p.rotation_out == 0);
    }
    check_validity(c, plans, cfg);
}

TEST_CASE("window covering the whole register needs no rotations") {
    const Circuit c = load_circuit("qft_n8.qasm");
    const SystemConfig cfg{8, 8, 8};
    const auto plans = schedule(c, cfg);
    for (const auto& p : plans) {
        CHECK(p.rotation_out == 0);
        CHECK(p.window_start == 0);
    }
    check_validity(c, plans, cfg);
}

TEST_CASE("a leading rotation-only plan appears when the first window is off-canonical") {
    SourceCircuit src;
    src.n_qubits = 8;
    src.statements.push_back({"cx", {}, {4, 5}, 0, 0});
    const Circuit c = lower(src);
    const SystemConfig cfg{4, 2, 8};
    const auto plans = schedule(c, cfg);
    REQUIRE(plans.size() == 2);
    CHECK(plans[0].occupied() == 0);
    CHECK(plans[0].window_start == 0);
    CHECK(plans[0].rotation_out == 4);
    CHECK(plans[1].window_start == 4);
    CHECK(plans[1].occupied() == 1);
    check_validity(c, plans, cfg);
}

TEST_CASE("unschedulable cx reports the stuck gate") {
    SourceCircuit src;
    src.n_qubits = 8;
    src.statements.push_back({"h", {}, {0}, 0, 0});
    src.statements.push_back({"cx", {}, {0, 4}, 0, 0});  // cyclic distance 4 >= k
    const Circuit c = lower(src);
    const SystemConfig cfg{4, 2, 8};
    try {
        (void)schedule(c, cfg);
        FAIL("expected ScheduleError");
    } catch (const ScheduleError& e) {
        CHECK(e.gate_id() == 1);
        CHECK(std::string(e.what()).find("cx q[0],q[4]") != std::string::npos);
    }
}

TEST_CASE("external controls unlock distant pairs when allowed") {
    SourceCircuit src;
    src.n_qubits = 8;
    src.statements.push_back({"cx", {}, {0, 4}, 0, 0});
    const Circuit c = lower(src);
    SystemConfig cfg{4, 2, 8};
    cfg.allow_external_control = true;
    const auto plans = schedule(c, cfg);
    std::size_t placed = 0;
    for (const auto& p : plans) placed += p.gate_ids().size();
    CHECK(placed == 1);
    // the control rides outside the window
    bool found = false;
    for (const auto& p : plans) {
        for (const auto& slot : p.slots) {
            if (slot.kind == SlotKind::controlled) {
                found = true;
                CHECK(slot.target_pos < cfg.window_width());
                CHECK(slot.control_pos >= cfg.window_width());
            }
        }
    }
    CHECK(found);
}

TEST_CASE("schedule is deterministic") {
    const Circuit c = load_circuit("ising_n10.qasm");
    const SystemConfig cfg{8, 4, 10};
    const auto a = schedule(c, cfg);
    const auto b = schedule(c, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].window_start == b[i].window_start);
        CHECK(a[i].rotation_out == b[i].rotation_out);
        CHECK(a[i].gate_ids() == b[i].gate_ids());
    }
}

TEST_CASE("validity holds over random circuits and configs") {
    std::mt19937 rng(90125);
    for (int iter = 0; iter < 120; ++iter) {
        const int n = 2 + static_cast<int>(rng() % 11);  // up to 12
        SystemConfig cfg;
        cfg.n_qubits = n;
        cfg.n_qpu = 1 + static_cast<int>(rng() % 24);
        cfg.n_sysqbits = 2 + static_cast<int>(rng() % (n + 1));
        test::RandomCircuitOptions opts;
        opts.n_qubits = n;
        opts.n_gates = 1 + static_cast<int>(rng() % 120);
        opts.max_control_distance = cfg.window_width() - 1;
        const Circuit c = test::random_circuit(rng, opts);
        const auto plans = schedule(c, cfg);
        check_validity(c, plans, cfg);
    }
}

TEST_CASE("each bitstream is maximal for its window when slots are unbounded") {
    std::mt19937 rng(5150);
    for (int iter = 0; iter < 20; ++iter) {
        const int n = 4 + static_cast<int>(rng() % 6);
        SystemConfig cfg;
        cfg.n_qubits = n;
        cfg.n_qpu = 100000;  // effectively unbounded
        cfg.n_sysqbits = 2 + static_cast<int>(rng() % 4);
        test::RandomCircuitOptions opts;
        opts.n_qubits = n;
        opts.n_gates = 60;
        opts.max_control_distance = cfg.window_width() - 1;
        const Circuit c = test::random_circuit(rng, opts);
        const DepDag dag = build_dag(c);
        const auto plans = schedule(c, cfg);

        std::vector<bool> done(c.gates.size(), false);
        for (const auto& plan : plans) {
            const auto replay = score_window(c, dag, done, plan.window_start, cfg);
            CHECK(replay == plan.gate_ids());
            for (std::uint32_t id : plan.gate_ids()) done[id] = true;
        }
    }
}

TEST_CASE("penalty-aware choice prefers a cheaper rotation at equal coverage") {
    // two independent cx gates: one reachable with rotation 2, one with
    // rotation 5 (inside the penalty band); the cheap window must come first
    SourceCircuit src;
    src.n_qubits = 16;
    src.statements.push_back({"cx", {}, {5, 6}, 0, 0});
    src.statements.push_back({"cx", {}, {2, 3}, 0, 0});
    const Circuit c = lower(src);
    const SystemConfig cfg{1, 2, 16};
    const auto plans = schedule(c, cfg, PenaltyTable::default_table());
    REQUIRE(!plans.empty());
    // window 2 costs rotation 2 (penalty 1), window 5 costs rotation 5 (penalty 12)
    bool first_real_window_seen = false;
    for (const auto& p : plans) {
        if (p.occupied() > 0) {
            CHECK(p.window_start == 2);
            first_real_window_seen = true;
            break;
        }
    }
    CHECK(first_real_window_seen);
    check_validity(c, plans, cfg);
}

TEST_CASE("utilization report rows and conservation") {
    const Circuit c = fragment();
    const SystemConfig cfg{4, 2, 4};
    const auto plans = schedule(c, cfg);
    const auto report = utilization_report(plans, cfg);

    REQUIRE(report.rows.size() == plans.size());
    CHECK(report.rows[0].utilization == 1.0);
    CHECK(report.rows[0].rotation == 2);
    CHECK(report.rows[0].relative_cost == 1.0);

    int total = 0;
    for (const auto& row : report.rows) total += row.occupied;
    CHECK(total == static_cast<int>(c.gates.size()));
}

TEST_CASE("all-NOP plan reports zero utilization") {
    BitstreamPlan nop;
    nop.slots.assign(4, PlanSlot{});
    const SystemConfig cfg{4, 2, 4};
    const auto report = utilization_report({nop}, cfg);
    CHECK(report.rows[0].utilization == 0.0);
    CHECK(report.mean_utilization == 0.0);
}

TEST_CASE("empty circuit schedules to no plans") {
    Circuit c;
    c.n_qubits = 3;
    CHECK(schedule(c, SystemConfig{2, 2, 3}).empty());
}
