// q2l: compile OpenQASM circuits into rotation-linked configuration
// bitstreams, execute them on the streaming pipeline model, verify against
// the dense reference simulator, and estimate hardware execution time.

#include "q2logic/bitstream.hpp"
#include "q2logic/device.hpp"
#include "q2logic/oracle.hpp"
#include "q2logic/perf.hpp"
#include "q2logic/qasm.hpp"
#include "q2logic/report.hpp"
#include "q2logic/scheduler.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <bit>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;     // parse errors, bad parameters
constexpr int kExitSemantic = 2;  // unschedulable circuit, failed verification
constexpr int kExitIo = 3;        // file and decode problems

struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const void* data, std::size_t size) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot write " + path);
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw IoFailure("short write to " + path);
}

void write_text_file(const std::string& path, const std::string& text) {
    write_file(path, text.data(), text.size());
}

std::string replace_extension(const std::string& path, const std::string& ext) {
    return std::filesystem::path(path).replace_extension(ext).string();
}

int default_threads() {
    if (const char* env = std::getenv("Q2L_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

q2::AlphaTable resolve_alpha(const std::string& alpha_path) {
    if (alpha_path.empty()) return q2::AlphaTable::builtin_default();
    return q2::load_alpha_table(read_text_file(alpha_path));
}

void dump_state_file(const std::string& path, const q2::StateVector& state) {
    // raw little-endian interleaved (re, im) single-precision pairs
    std::vector<std::uint8_t> bytes;
    bytes.reserve(state.amplitudes.size() * 8);
    const auto put = [&](float v) {
        const std::uint32_t u = std::bit_cast<std::uint32_t>(v);
        bytes.push_back(static_cast<std::uint8_t>(u & 0xff));
        bytes.push_back(static_cast<std::uint8_t>((u >> 8) & 0xff));
        bytes.push_back(static_cast<std::uint8_t>((u >> 16) & 0xff));
        bytes.push_back(static_cast<std::uint8_t>((u >> 24) & 0xff));
    };
    for (const q2::cfloat& a : state.amplitudes) {
        put(a.real());
        put(a.imag());
    }
    write_file(path, bytes.data(), bytes.size());
}

q2::VerificationResult verify_against_oracle(const q2::Circuit& circuit,
                                             const q2::StateVector& device_state,
                                             double tolerance) {
    const q2::oracle::DenseState reference = q2::oracle::run(circuit);
    double max_linf = 0.0;
    for (std::size_t i = 0; i < reference.amplitudes.size(); ++i) {
        const q2::cdouble got{static_cast<double>(device_state.amplitudes[i].real()),
                              static_cast<double>(device_state.amplitudes[i].imag())};
        max_linf = std::max(max_linf, std::abs(reference.amplitudes[i] - got));
    }
    q2::VerificationResult result;
    result.max_linf = max_linf;
    result.tolerance = tolerance;
    result.norm = device_state.norm_squared();
    result.pass = max_linf <= tolerance;
    return result;
}

struct CompileArgs {
    std::string qasm_path;
    int n_qpu = 0;
    int n_sysqbits = 0;
    std::string out_path;
    std::string alpha_path;
    std::string csv_path;
    std::string dag_path;
    std::string name;
    bool allow_external_control = false;
};

int run_compile(const CompileArgs& args) {
    std::vector<q2::Diagnostic> warnings;
    q2::ParseOptions popts;
    popts.filename = args.qasm_path;
    popts.warnings = &warnings;
    const q2::SourceCircuit source = q2::parse_qasm(read_text_file(args.qasm_path), popts);
    for (const q2::Diagnostic& w : warnings) std::cerr << w.to_string() << "\n";
    const q2::Circuit circuit = q2::lower(source);

    q2::SystemConfig cfg;
    cfg.n_qpu = args.n_qpu;
    cfg.n_sysqbits = args.n_sysqbits;
    cfg.n_qubits = circuit.n_qubits;
    cfg.allow_external_control = args.allow_external_control;
    cfg.validate();

    const q2::AlphaTable alpha = resolve_alpha(args.alpha_path);
    const q2::PenaltyTable penalty = q2::penalty_from_alpha(alpha);
    const std::vector<q2::BitstreamPlan> plans = q2::schedule(circuit, cfg, penalty);

    const std::string out =
        args.out_path.empty() ? replace_extension(args.qasm_path, ".q2l") : args.out_path;
    const std::vector<std::uint8_t> bytes = q2::encode(plans, cfg);
    write_file(out, bytes.data(), bytes.size());
    const std::string gates_path = replace_extension(out, ".gates.json");
    write_text_file(gates_path, q2::gate_table_json(circuit).dump(2) + "\n");

    if (!args.csv_path.empty()) {
        write_text_file(args.csv_path, q2::bitstream_csv(plans, cfg, penalty, std::nullopt));
    }
    if (!args.dag_path.empty()) {
        write_text_file(args.dag_path, q2::to_dot(circuit, q2::build_dag(circuit)));
    }

    const std::string name =
        args.name.empty() ? std::filesystem::path(args.qasm_path).stem().string() : args.name;
    q2::ordered_json report = q2::compile_report_json(name, circuit, cfg, plans, penalty);
    report["outputs"] = {{"q2l", out}, {"gates", gates_path}};
    std::cout << report.dump(2) << "\n";
    return kExitOk;
}

struct SimulateArgs {
    std::string q2l_path;
    bool verify = false;
    std::string gates_path;
    std::string dump_path;
    double tolerance = 1e-4;
    int threads = 0;
};

int run_simulate(const SimulateArgs& args) {
    const q2::DecodedProgram program = q2::decode(read_binary_file(args.q2l_path));

    q2::StateVector state = q2::init_state(program.config.n_qubits);
    q2::RunOptions ropts;
    ropts.threads = args.threads > 0 ? args.threads : default_threads();
    q2::run_program(state, program.plans, program.config, ropts);
    q2::canonicalize(state);

    std::optional<q2::VerificationResult> verification;
    if (args.verify) {
        const std::string gates_path = args.gates_path.empty()
                                           ? replace_extension(args.q2l_path, ".gates.json")
                                           : args.gates_path;
        const q2::ordered_json table = q2::ordered_json::parse(read_text_file(gates_path));
        const q2::Circuit circuit = q2::circuit_from_gate_table(table);
        if (circuit.n_qubits != program.config.n_qubits) {
            throw IoFailure("gate table width disagrees with the bitstream file");
        }
        verification = verify_against_oracle(circuit, state, args.tolerance);
    }

    if (!args.dump_path.empty()) dump_state_file(args.dump_path, state);

    std::cout << q2::simulate_report_json(program.config, state, program.plans.size(),
                                          verification)
                     .dump(2)
              << "\n";
    return verification && !verification->pass ? kExitSemantic : kExitOk;
}

struct EstimateArgs {
    std::string q2l_path;
    std::string preset;
    double f_max = 0.0;
    double f_mem = 0.0;
    double blw = 0.0;
    double t_cfg = -1.0;
    std::string alpha_path;
};

q2::PerfParams resolve_params(const EstimateArgs& args, bool allow_default_preset) {
    q2::PerfParams params;
    const bool any_explicit =
        args.f_max > 0.0 || args.f_mem > 0.0 || args.blw > 0.0 || args.t_cfg >= 0.0;
    if (!args.preset.empty()) {
        if (args.preset != "de10-agilex") {
            throw CLI::ValidationError("unknown preset '" + args.preset + "'");
        }
        params = q2::de10_agilex_preset();
    } else if (any_explicit || !allow_default_preset) {
        if (args.f_max <= 0.0 || args.f_mem <= 0.0 || args.blw <= 0.0 || args.t_cfg < 0.0) {
            throw CLI::ValidationError(
                "either --preset or all of --fmax/--fmem/--blw/--tcfg are required");
        }
    } else {
        params = q2::de10_agilex_preset();
    }
    if (args.f_max > 0.0) params.f_max_hz = args.f_max;
    if (args.f_mem > 0.0) params.f_mem_hz = args.f_mem;
    if (args.blw > 0.0) params.burst_load_bits = args.blw;
    if (args.t_cfg >= 0.0) params.t_cfg_seconds = args.t_cfg;
    if (!args.alpha_path.empty()) params.alpha = resolve_alpha(args.alpha_path);
    params.validate();
    return params;
}

int run_estimate(const EstimateArgs& args) {
    const q2::DecodedProgram program = q2::decode(read_binary_file(args.q2l_path));
    const q2::PerfParams params = resolve_params(args, /*allow_default_preset=*/false);
    const q2::ProgramEstimate estimate =
        q2::program_time(params, program.plans, program.config.n_qubits);
    std::cout << q2::estimate_report_json(params, estimate).dump(2) << "\n";
    return kExitOk;
}

struct ReportArgs {
    CompileArgs compile;
    EstimateArgs estimate;
    double tolerance = 1e-4;
    int threads = 0;
    std::string csv_path;
};

int run_report(const ReportArgs& args) {
    std::vector<q2::Diagnostic> warnings;
    q2::ParseOptions popts;
    popts.filename = args.compile.qasm_path;
    popts.warnings = &warnings;
    const q2::SourceCircuit source =
        q2::parse_qasm(read_text_file(args.compile.qasm_path), popts);
    for (const q2::Diagnostic& w : warnings) std::cerr << w.to_string() << "\n";
    const q2::Circuit circuit = q2::lower(source);

    q2::SystemConfig cfg;
    cfg.n_qpu = args.compile.n_qpu;
    cfg.n_sysqbits = args.compile.n_sysqbits;
    cfg.n_qubits = circuit.n_qubits;
    cfg.allow_external_control = args.compile.allow_external_control;
    cfg.validate();

    const q2::AlphaTable alpha = resolve_alpha(args.compile.alpha_path);
    const q2::PenaltyTable penalty = q2::penalty_from_alpha(alpha);
    const std::vector<q2::BitstreamPlan> plans = q2::schedule(circuit, cfg, penalty);

    q2::PerfParams params = resolve_params(args.estimate, /*allow_default_preset=*/true);
    params.alpha = alpha;
    params.validate();
    const q2::ProgramEstimate estimate = q2::program_time(params, plans, cfg.n_qubits);

    q2::StateVector state = q2::init_state(cfg.n_qubits);
    q2::RunOptions ropts;
    ropts.threads = args.threads > 0 ? args.threads : default_threads();
    q2::run_program(state, plans, cfg, ropts);
    q2::canonicalize(state);
    const q2::VerificationResult verification =
        verify_against_oracle(circuit, state, args.tolerance);

    if (!args.csv_path.empty()) {
        write_text_file(args.csv_path, q2::bitstream_csv(plans, cfg, penalty, estimate));
    }

    const std::string name = std::filesystem::path(args.compile.qasm_path).stem().string();
    std::cout << q2::run_report_json(name, circuit, cfg, plans, penalty, estimate, verification)
                     .dump(2)
              << "\n";
    return verification.pass ? kExitOk : kExitSemantic;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Q2Logic bitstream compiler and pipeline simulator"};
    app.require_subcommand(1);

    CompileArgs compile_args;
    CLI::App* compile = app.add_subcommand("compile", "compile a QASM circuit to a .q2l file");
    compile->add_option("qasm", compile_args.qasm_path, "input OpenQASM 2.0 file")->required();
    compile->add_option("--nqpu", compile_args.n_qpu, "QPU chain length")->required();
    compile->add_option("--sysqbits", compile_args.n_sysqbits, "window width in qubits")
        ->required();
    compile->add_option("--out", compile_args.out_path, "output .q2l path");
    compile->add_option("--alpha-table", compile_args.alpha_path, "rotation,alpha CSV file");
    compile->add_option("--csv", compile_args.csv_path, "write per-bitstream CSV here");
    compile->add_option("--dump-dag", compile_args.dag_path, "write the dependency DAG as DOT");
    compile->add_option("--name", compile_args.name, "circuit name for the report");
    compile->add_flag("--allow-external-control", compile_args.allow_external_control,
                      "let controls sit outside the window");

    SimulateArgs sim_args;
    CLI::App* simulate =
        app.add_subcommand("simulate", "execute a .q2l file on the pipeline model");
    simulate->add_option("q2l", sim_args.q2l_path, "input .q2l file")->required();
    simulate->add_flag("--verify", sim_args.verify, "compare against the dense reference");
    simulate->add_option("--gates", sim_args.gates_path,
                         "gate table (defaults beside the input)");
    simulate->add_option("--tolerance", sim_args.tolerance, "verification L-inf tolerance");
    simulate->add_option("--dump-state", sim_args.dump_path, "write raw amplitudes here");
    simulate->add_option("--threads", sim_args.threads, "worker cap (or Q2L_THREADS)");

    EstimateArgs est_args;
    CLI::App* estimate =
        app.add_subcommand("estimate", "estimate execution time of a .q2l file");
    estimate->add_option("q2l", est_args.q2l_path, "input .q2l file")->required();
    estimate->add_option("--preset", est_args.preset, "parameter preset (de10-agilex)");
    estimate->add_option("--fmax", est_args.f_max, "device clock in Hz");
    estimate->add_option("--fmem", est_args.f_mem, "memory clock in Hz");
    estimate->add_option("--blw", est_args.blw, "burst load width in bits");
    estimate->add_option("--tcfg", est_args.t_cfg,
                         "per-bitstream configuration time in seconds");
    estimate->add_option("--alpha-table", est_args.alpha_path, "rotation,alpha CSV file");

    ReportArgs report_args;
    CLI::App* report = app.add_subcommand("report", "compile, simulate, verify and estimate");
    report->add_option("qasm", report_args.compile.qasm_path, "input OpenQASM 2.0 file")
        ->required();
    report->add_option("--nqpu", report_args.compile.n_qpu, "QPU chain length")->required();
    report->add_option("--sysqbits", report_args.compile.n_sysqbits, "window width in qubits")
        ->required();
    report->add_option("--alpha-table", report_args.compile.alpha_path,
                       "rotation,alpha CSV file");
    report->add_option("--preset", report_args.estimate.preset, "parameter preset");
    report->add_option("--fmax", report_args.estimate.f_max, "device clock in Hz");
    report->add_option("--fmem", report_args.estimate.f_mem, "memory clock in Hz");
    report->add_option("--blw", report_args.estimate.blw, "burst load width in bits");
    report->add_option("--tcfg", report_args.estimate.t_cfg, "configuration time in seconds");
    report->add_option("--csv", report_args.csv_path, "write per-bitstream CSV here");
    report->add_option("--tolerance", report_args.tolerance, "verification L-inf tolerance");
    report->add_option("--threads", report_args.threads, "worker cap (or Q2L_THREADS)");
    report->add_flag("--allow-external-control",
                     report_args.compile.allow_external_control,
                     "let controls sit outside the window");

    try {
        app.parse(argc, argv);
        if (compile->parsed()) return run_compile(compile_args);
        if (simulate->parsed()) return run_simulate(sim_args);
        if (estimate->parsed()) return run_estimate(est_args);
        if (report->parsed()) return run_report(report_args);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const q2::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const q2::ScheduleError& e) {
        std::cerr << "error: unschedulable circuit: " << e.what() << "\n";
        return kExitSemantic;
    } catch (const q2::DecodeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const IoFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
