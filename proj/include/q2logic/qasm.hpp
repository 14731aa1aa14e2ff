#pragma once

#include "q2logic/circuit.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace q2 {

// A qelib1-level gate application with evaluated parameters and flattened
// qubit indices.
struct SourceStatement {
    std::string name;
    std::vector<double> params;  // radians
    std::vector<int> qubits;
    int line = 0;
    int col = 0;
};

// Parsed program. User-defined gates are already expanded, measurements and
// barriers dropped, registers flattened into one index space in declaration
// order.
struct SourceCircuit {
    int n_qubits = 0;
    std::vector<SourceStatement> statements;
};

struct Diagnostic {
    std::string file;
    int line = 0;
    int col = 0;
    std::string message;

    std::string to_string() const;  // "file:line:col: message"
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, int line, int col, const std::string& message);

    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

struct ParseOptions {
    std::string filename = "<input>";
    std::vector<Diagnostic>* warnings = nullptr;  // ignored-statement notes land here
};

// Parse an OpenQASM 2.0 subset (the dialect used by machine-generated
// benchmark circuits). `include "qelib1.inc";` enables the built-in gate set;
// no file access happens. creg/barrier are accepted and ignored, measure is
// dropped with a warning, opaque is rejected.
SourceCircuit parse_qasm(std::string_view text, const ParseOptions& opts = {});

// Convenience wrapper that reads `path` and parses it with the file name in
// diagnostics.
SourceCircuit parse_qasm_file(const std::string& path,
                              std::vector<Diagnostic>* warnings = nullptr);

// Lower qelib1-level statements to the primitive gate set (unary and
// singly-controlled unary). swap becomes 3 cx, ccx the standard 15-gate
// {h,t,tdg,cx} decomposition. Gate order preserves source dependencies.
Circuit lower(const SourceCircuit& source);

}  // namespace q2
