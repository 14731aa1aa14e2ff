#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

// End-to-end checks against the installed command-line surface: exit codes,
// artifact determinism, and the JSON/CSV report shapes.

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
    std::string stderr_text;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "q2l_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = scratch_dir() / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = scratch_dir() / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string(Q2L_BIN) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.stdout_text = slurp(out);
    result.stderr_text = slurp(err);
    return result;
}

std::string circuit(const std::string& name) {
    return std::string(Q2L_CIRCUITS_DIR) + "/" + name;
}

std::vector<char> bytes_of(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("compile reports the narrated fragment schedule") {
    const fs::path out = scratch_dir() / "frag.q2l";
    const RunResult r = run_cli("compile " + circuit("adder_fragment_n4.qasm") +
                                " --nqpu 4 --sysqbits 2 --out " + out.string());
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(r.stdout_text);
    CHECK(report["n_qubits"] == 4);
    CHECK(report["gate_count"] == 11);
    CHECK(report["bitstreams"][0]["utilization"] == 1.0);
    CHECK(report["bitstreams"][0]["rotation"] == 2);
    CHECK(report["bitstreams"][1]["rotation"] == -1);
    CHECK(fs::exists(out));
    CHECK(fs::exists(scratch_dir() / "frag.gates.json"));
}

TEST_CASE("compile twice produces byte-identical artifacts") {
    const fs::path a = scratch_dir() / "det_a.q2l";
    const fs::path b = scratch_dir() / "det_b.q2l";
    REQUIRE(run_cli("compile " + circuit("ising_n10.qasm") + " --nqpu 8 --sysqbits 4 --out " +
                    a.string())
                .exit_code == 0);
    REQUIRE(run_cli("compile " + circuit("ising_n10.qasm") + " --nqpu 8 --sysqbits 4 --out " +
                    b.string())
                .exit_code == 0);
    CHECK(bytes_of(a) == bytes_of(b));
}

TEST_CASE("window covering the register leaves every rotation at zero") {
    const fs::path out = scratch_dir() / "whole.q2l";
    const RunResult r = run_cli("compile " + circuit("qft_n8.qasm") +
                                " --nqpu 8 --sysqbits 8 --out " + out.string());
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(r.stdout_text);
    for (const auto& row : report["bitstreams"]) {
        CHECK(row["rotation"] == 0);
    }
}

TEST_CASE("measure statements surface as warnings on stderr") {
    const fs::path out = scratch_dir() / "adder10.q2l";
    const RunResult r = run_cli("compile " + circuit("adder_n10.qasm") +
                                " --nqpu 8 --sysqbits 6 --out " + out.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.stderr_text.find("warning: measurement ignored") != std::string::npos);
}

TEST_CASE("simulate with verification passes for the cat state") {
    const fs::path out = scratch_dir() / "cat16.q2l";
    REQUIRE(run_cli("compile " + circuit("cat_state_n16.qasm") +
                    " --nqpu 8 --sysqbits 4 --out " + out.string())
                .exit_code == 0);
    const RunResult r = run_cli("simulate " + out.string() + " --verify --threads 2");
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(r.stdout_text);
    CHECK(report["verify"]["pass"] == true);
    CHECK(report["norm"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));
    // top amplitudes sit on |0...0> and |1...1>
    std::set<std::uint64_t> top;
    top.insert(report["top_amplitudes"][0]["index"].get<std::uint64_t>());
    top.insert(report["top_amplitudes"][1]["index"].get<std::uint64_t>());
    CHECK(top == std::set<std::uint64_t>{0, 65535});
}

TEST_CASE("simulate can dump the raw state") {
    const fs::path out = scratch_dir() / "cat4.q2l";
    const fs::path dump = scratch_dir() / "cat4.state";
    REQUIRE(run_cli("compile " + circuit("cat_state_n4.qasm") +
                    " --nqpu 4 --sysqbits 2 --out " + out.string())
                .exit_code == 0);
    REQUIRE(run_cli("simulate " + out.string() + " --dump-state " + dump.string())
                .exit_code == 0);
    const auto raw = bytes_of(dump);
    REQUIRE(raw.size() == 16 * 8);  // 2^4 amplitudes, 8 bytes each
    // amplitude 0 is about 1/sqrt(2): little-endian f32 0x3F3504F3
    CHECK(static_cast<unsigned char>(raw[0]) == 0xF3);
    CHECK(static_cast<unsigned char>(raw[3]) == 0x3F);
}

TEST_CASE("corrupted bitstream files exit with the I/O code") {
    const fs::path out = scratch_dir() / "corrupt.q2l";
    REQUIRE(run_cli("compile " + circuit("cat_state_n4.qasm") +
                    " --nqpu 4 --sysqbits 2 --out " + out.string())
                .exit_code == 0);
    auto bytes = bytes_of(out);
    bytes[0] = 'X';
    std::ofstream(out, std::ios::binary).write(bytes.data(), bytes.size());
    const RunResult r = run_cli("simulate " + out.string());
    CHECK(r.exit_code == 3);
    CHECK(r.stderr_text.find("bad magic") != std::string::npos);
}

TEST_CASE("verification failure exits with code 2") {
    const fs::path out = scratch_dir() / "tight.q2l";
    REQUIRE(run_cli("compile " + circuit("ising_n10.qasm") +
                    " --nqpu 8 --sysqbits 4 --out " + out.string())
                .exit_code == 0);
    // an impossible tolerance forces the failure path
    const RunResult r = run_cli("simulate " + out.string() + " --verify --tolerance 1e-30");
    CHECK(r.exit_code == 2);
    const json report = json::parse(r.stdout_text);
    CHECK(report["verify"]["pass"] == false);
}

TEST_CASE("parse errors exit with code 1 and name the location") {
    const fs::path bad = scratch_dir() / "bad.qasm";
    std::ofstream(bad) << "OPENQASM 2.0;\nqreg q[2];\nfrobnicate q[0];\n";
    const RunResult r = run_cli("compile " + bad.string() + " --nqpu 2 --sysqbits 2");
    CHECK(r.exit_code == 1);
    CHECK(r.stderr_text.find("bad.qasm:3:1") != std::string::npos);
}

TEST_CASE("unschedulable circuits exit with code 2 and name the gate") {
    const fs::path bad = scratch_dir() / "far.qasm";
    std::ofstream(bad) << "OPENQASM 2.0;\nqreg q[8];\ncx q[0],q[4];\n";
    const RunResult r = run_cli("compile " + bad.string() + " --nqpu 2 --sysqbits 2");
    CHECK(r.exit_code == 2);
    CHECK(r.stderr_text.find("unschedulable") != std::string::npos);
    CHECK(r.stderr_text.find("cx q[0],q[4]") != std::string::npos);
}

TEST_CASE("the external-control flag makes the distant pair compile and verify") {
    const fs::path bad = scratch_dir() / "far_ok.qasm";
    std::ofstream(bad) << "OPENQASM 2.0;\nqreg q[8];\nh q[0];\ncx q[0],q[4];\n";
    const fs::path out = scratch_dir() / "far_ok.q2l";
    REQUIRE(run_cli("compile " + bad.string() +
                    " --nqpu 2 --sysqbits 2 --allow-external-control --out " + out.string())
                .exit_code == 0);
    CHECK(run_cli("simulate " + out.string() + " --verify").exit_code == 0);
}

TEST_CASE("missing input files exit with the I/O code") {
    CHECK(run_cli("compile /nonexistent.qasm --nqpu 2 --sysqbits 2").exit_code == 3);
    CHECK(run_cli("simulate /nonexistent.q2l").exit_code == 3);
}

TEST_CASE("estimate reproduces the worked example") {
    const fs::path out = scratch_dir() / "cat16b.q2l";
    REQUIRE(run_cli("compile " + circuit("cat_state_n16.qasm") +
                    " --nqpu 64 --sysqbits 16 --out " + out.string())
                .exit_code == 0);
    const RunResult r = run_cli("estimate " + out.string() +
                                " --fmax 200e6 --fmem 200e6 --blw 128 --tcfg 0");
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(r.stdout_text);
    // one full-register bitstream at rotation 0: 8*2^16 / (0.8 * 200e6 * 2)
    REQUIRE(report["bitstreams"].size() == 1);
    const double seconds = report["bitstreams"][0]["seconds"].get<double>();
    CHECK(seconds == doctest::Approx(8.0 * 65536 / (0.8 * 200e6 * 2.0)).epsilon(1e-9));
    CHECK(report["bitstreams"][0]["in_penalty_band"] == false);
}

TEST_CASE("estimate without parameters is a usage error") {
    const fs::path out = scratch_dir() / "cat16c.q2l";
    REQUIRE(run_cli("compile " + circuit("cat_state_n16.qasm") +
                    " --nqpu 8 --sysqbits 4 --out " + out.string())
                .exit_code == 0);
    CHECK(run_cli("estimate " + out.string()).exit_code == 1);
    CHECK(run_cli("estimate " + out.string() + " --fmax 200e6").exit_code == 1);
    CHECK(run_cli("estimate " + out.string() + " --preset nope").exit_code == 1);
    CHECK(run_cli("estimate " + out.string() + " --preset de10-agilex").exit_code == 0);
}

TEST_CASE("report emits the combined view with a CSV row per bitstream") {
    const fs::path csv = scratch_dir() / "report.csv";
    const RunResult r = run_cli("report " + circuit("wstate_n8.qasm") +
                                " --nqpu 8 --sysqbits 4 --preset de10-agilex --csv " +
                                csv.string());
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(r.stdout_text);
    CHECK(report["verification"]["pass"] == true);
    CHECK(report["verification"]["max_linf"].get<double>() < 1e-4);
    CHECK(report["total_seconds"].get<double>() > 0.0);

    const std::string text = slurp(csv);
    const std::size_t rows = std::count(text.begin(), text.end(), '\n');
    CHECK(rows == report["bitstream_count"].get<std::size_t>() + 1);  // header + data
    CHECK(text.find("bandwidth_bytes_per_s") != std::string::npos);
}

TEST_CASE("penalty-band rotations are flagged in estimates") {
    const fs::path q2l = scratch_dir() / "flag.q2l";
    const fs::path far = scratch_dir() / "flag.qasm";
    // a lone pair at distance 5 forces a rotation through the penalty band
    std::ofstream(far) << "OPENQASM 2.0;\nqreg q[16];\ncx q[5],q[6];\n";
    REQUIRE(run_cli("compile " + far.string() + " --nqpu 2 --sysqbits 2 --out " +
                    q2l.string())
                .exit_code == 0);
    const RunResult r = run_cli("estimate " + q2l.string() + " --preset de10-agilex");
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(r.stdout_text);
    bool any_flagged = false;
    for (const auto& row : report["bitstreams"]) {
        if (row["in_penalty_band"].get<bool>()) any_flagged = true;
    }
    CHECK(any_flagged);
}

TEST_CASE("compile then simulate --verify holds across the whole corpus") {
    // one feasible configuration per circuit (window wide enough for its
    // longest control-target distance)
    const std::vector<std::pair<std::string, std::string>> jobs = {
        {"adder_fragment_n4.qasm", "--nqpu 4 --sysqbits 2"},
        {"adder_n10.qasm", "--nqpu 16 --sysqbits 6"},
        {"cat_state_n4.qasm", "--nqpu 4 --sysqbits 2"},
        {"cat_state_n16.qasm", "--nqpu 8 --sysqbits 4"},
        {"ising_n10.qasm", "--nqpu 8 --sysqbits 4"},
        {"ising_n16.qasm", "--nqpu 8 --sysqbits 4"},
        {"qft_n8.qasm", "--nqpu 16 --sysqbits 6"},
        {"qft_n16.qasm", "--nqpu 32 --sysqbits 10"},
        {"wstate_n8.qasm", "--nqpu 8 --sysqbits 4"},
        {"wstate_n16.qasm", "--nqpu 8 --sysqbits 4"},
    };
    for (const auto& [file, flags] : jobs) {
        CAPTURE(file);
        const fs::path out = scratch_dir() / (file + ".q2l");
        REQUIRE(run_cli("compile " + circuit(file) + " " + flags + " --out " + out.string())
                    .exit_code == 0);
        const RunResult r = run_cli("simulate " + out.string() + " --verify");
        REQUIRE(r.exit_code == 0);
        CHECK(json::parse(r.stdout_text)["verify"]["pass"] == true);
    }
}

TEST_CASE("dag dump renders to DOT") {
    const fs::path dot = scratch_dir() / "frag.dot";
    const fs::path out = scratch_dir() / "frag_dot.q2l";
    REQUIRE(run_cli("compile " + circuit("adder_fragment_n4.qasm") +
                    " --nqpu 4 --sysqbits 2 --out " + out.string() + " --dump-dag " +
                    dot.string())
                .exit_code == 0);
    const std::string text = slurp(dot);
    CHECK(text.find("digraph") != std::string::npos);
    CHECK(text.find("->") != std::string::npos);
}
