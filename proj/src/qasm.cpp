#include "q2logic/qasm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

namespace q2 {

std::string Diagnostic::to_string() const {
    std::ostringstream out;
    out << file << ":" << line << ":" << col << ": " << message;
    return out.str();
}

ParseError::ParseError(const std::string& file, int line, int col, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(col) +
                         ": error: " + message),
      line_(line),
      col_(col) {}

namespace {

enum class Tok {
    eof,
    identifier,
    integer,
    real,
    string,
    semicolon,
    comma,
    lparen,
    rparen,
    lbracket,
    rbracket,
    lbrace,
    rbrace,
    arrow,
    plus,
    minus,
    star,
    slash,
    caret,
};

struct Token {
    Tok kind = Tok::eof;
    std::string text;
    double real_value = 0.0;
    long int_value = 0;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

    Token next() {
        skip_ws_and_comments();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= text_.size()) {
            t.kind = Tok::eof;
            return t;
        }
        const char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                advance();
            }
            t.kind = Tok::identifier;
            t.text = std::string(text_.substr(start, pos_ - start));
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            return lex_number(t);
        }
        switch (c) {
            case '"': return lex_string(t);
            case ';': advance(); t.kind = Tok::semicolon; return t;
            case ',': advance(); t.kind = Tok::comma; return t;
            case '(': advance(); t.kind = Tok::lparen; return t;
            case ')': advance(); t.kind = Tok::rparen; return t;
            case '[': advance(); t.kind = Tok::lbracket; return t;
            case ']': advance(); t.kind = Tok::rbracket; return t;
            case '{': advance(); t.kind = Tok::lbrace; return t;
            case '}': advance(); t.kind = Tok::rbrace; return t;
            case '+': advance(); t.kind = Tok::plus; return t;
            case '*': advance(); t.kind = Tok::star; return t;
            case '/': advance(); t.kind = Tok::slash; return t;
            case '^': advance(); t.kind = Tok::caret; return t;
            case '-':
                advance();
                if (pos_ < text_.size() && text_[pos_] == '>') {
                    advance();
                    t.kind = Tok::arrow;
                } else {
                    t.kind = Tok::minus;
                }
                return t;
            default:
                throw ParseError(file_, t.line, t.col,
                                 std::string("unexpected character '") + c + "'");
        }
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws_and_comments() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    Token lex_number(Token t) {
        const std::size_t start = pos_;
        bool is_real = false;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            advance();
        }
        if (pos_ < text_.size() && text_[pos_] == '.') {
            is_real = true;
            advance();
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                advance();
            }
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            is_real = true;
            advance();
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                advance();
            }
        }
        const std::string body(text_.substr(start, pos_ - start));
        if (is_real) {
            t.kind = Tok::real;
            t.real_value = std::stod(body);
        } else {
            t.kind = Tok::integer;
            t.int_value = std::stol(body);
            t.real_value = static_cast<double>(t.int_value);
        }
        t.text = body;
        return t;
    }

    Token lex_string(Token t) {
        advance();  // opening quote
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '"') advance();
        if (pos_ >= text_.size()) {
            throw ParseError(file_, t.line, t.col, "unterminated string literal");
        }
        t.kind = Tok::string;
        t.text = std::string(text_.substr(start, pos_ - start));
        advance();  // closing quote
        return t;
    }

    std::string_view text_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// Parameter expressions inside gate bodies stay symbolic until the call site
// binds numeric values.
struct Expr {
    enum class Kind { number, param, add, sub, mul, div, pow, neg, call };
    Kind kind = Kind::number;
    double value = 0.0;
    std::string name;  // parameter or function name
    std::shared_ptr<const Expr> lhs;
    std::shared_ptr<const Expr> rhs;
};
using ExprPtr = std::shared_ptr<const Expr>;

struct BodyCall {
    std::string name;
    std::vector<ExprPtr> params;
    std::vector<std::string> args;
    int line = 0;
    int col = 0;
};

struct GateTemplate {
    std::vector<std::string> params;
    std::vector<std::string> args;
    std::vector<BodyCall> body;
};

struct BuiltinSig {
    int n_params;
    int n_qubits;
};

std::optional<BuiltinSig> builtin_signature(std::string_view name) {
    const int unary = gate_param_count(name == "U" ? "u3" : name);
    if (name != "U" && unary >= 0) return BuiltinSig{unary, 1};
    if (name == "U") return BuiltinSig{3, 1};
    if (name == "cx" || name == "CX" || name == "cz" || name == "ch" || name == "swap") {
        return BuiltinSig{0, 2};
    }
    if (name == "cu1" || name == "crz") return BuiltinSig{1, 2};
    if (name == "ccx") return BuiltinSig{0, 3};
    return std::nullopt;
}

std::string normalize_builtin(const std::string& name) {
    if (name == "U") return "u3";
    if (name == "CX") return "cx";
    return name;
}

class Parser {
public:
    Parser(std::string_view text, const ParseOptions& opts)
        : lexer_(text, opts.filename), file_(opts.filename), warnings_(opts.warnings) {
        cur_ = lexer_.next();
    }

    SourceCircuit parse() {
        expect_keyword("OPENQASM");
        const Token version = expect(Tok::real, "version number");
        if (version.text != "2.0") {
            throw ParseError(file_, version.line, version.col,
                             "unsupported OPENQASM version " + version.text);
        }
        expect(Tok::semicolon, "';'");

        while (cur_.kind != Tok::eof) {
            parse_statement();
        }
        circuit_.n_qubits = next_qubit_;
        return std::move(circuit_);
    }

private:
    [[noreturn]] void fail(const Token& at, const std::string& message) const {
        throw ParseError(file_, at.line, at.col, message);
    }

    void warn(const Token& at, const std::string& message) {
        if (warnings_) {
            warnings_->push_back(Diagnostic{file_, at.line, at.col, "warning: " + message});
        }
    }

    Token take() {
        Token t = cur_;
        cur_ = lexer_.next();
        return t;
    }

    Token expect(Tok kind, const std::string& what) {
        if (cur_.kind != kind) {
            fail(cur_, "expected " + what + ", found '" +
                           (cur_.kind == Tok::eof ? "<eof>" : cur_.text) + "'");
        }
        return take();
    }

    void expect_keyword(const std::string& kw) {
        if (cur_.kind != Tok::identifier || cur_.text != kw) {
            fail(cur_, "expected '" + kw + "'");
        }
        take();
    }

    bool at_keyword(const std::string& kw) const {
        return cur_.kind == Tok::identifier && cur_.text == kw;
    }

    void parse_statement() {
        if (cur_.kind != Tok::identifier) {
            fail(cur_, "expected a statement");
        }
        const std::string& kw = cur_.text;
        if (kw == "include") {
            parse_include();
        } else if (kw == "qreg") {
            parse_qreg();
        } else if (kw == "creg") {
            parse_creg();
        } else if (kw == "gate") {
            parse_gate_decl();
        } else if (kw == "opaque") {
            fail(cur_, "opaque gates are not supported");
        } else if (kw == "barrier") {
            parse_barrier();
        } else if (kw == "measure") {
            parse_measure();
        } else if (kw == "reset" || kw == "if") {
            fail(cur_, "unsupported statement '" + kw + "'");
        } else {
            parse_gate_call();
        }
    }

    void parse_include() {
        take();
        const Token path = expect(Tok::string, "include path");
        if (path.text != "qelib1.inc") {
            fail(path, "only \"qelib1.inc\" can be included");
        }
        expect(Tok::semicolon, "';'");
    }

    void parse_qreg() {
        const Token kw = take();
        const Token name = expect(Tok::identifier, "register name");
        expect(Tok::lbracket, "'['");
        const Token size = expect(Tok::integer, "register size");
        expect(Tok::rbracket, "']'");
        expect(Tok::semicolon, "';'");
        if (size.int_value <= 0) fail(size, "register size must be positive");
        if (qregs_.count(name.text) || cregs_.count(name.text)) {
            fail(name, "register '" + name.text + "' already declared");
        }
        (void)kw;
        qregs_[name.text] = {next_qubit_, static_cast<int>(size.int_value)};
        next_qubit_ += static_cast<int>(size.int_value);
    }

    void parse_creg() {
        take();
        const Token name = expect(Tok::identifier, "register name");
        expect(Tok::lbracket, "'['");
        const Token size = expect(Tok::integer, "register size");
        expect(Tok::rbracket, "']'");
        expect(Tok::semicolon, "';'");
        if (size.int_value <= 0) fail(size, "register size must be positive");
        if (qregs_.count(name.text) || cregs_.count(name.text)) {
            fail(name, "register '" + name.text + "' already declared");
        }
        cregs_[name.text] = static_cast<int>(size.int_value);
    }

    void parse_barrier() {
        take();
        // operand list carries no meaning here
        while (cur_.kind != Tok::semicolon && cur_.kind != Tok::eof) take();
        expect(Tok::semicolon, "';'");
    }

    void parse_measure() {
        const Token kw = take();
        parse_argument(true);
        expect(Tok::arrow, "'->'");
        parse_argument(false);
        expect(Tok::semicolon, "';'");
        warn(kw, "measurement ignored (states evolve without collapse)");
    }

    // (offset, size): size > 1 for a whole quantum register
    std::pair<int, int> parse_argument(bool quantum) {
        const Token name = expect(Tok::identifier, "register name");
        const auto qit = qregs_.find(name.text);
        const auto cit = cregs_.find(name.text);
        int base = 0;
        int size = 0;
        if (quantum) {
            if (qit == qregs_.end()) fail(name, "unknown quantum register '" + name.text + "'");
            base = qit->second.first;
            size = qit->second.second;
        } else {
            if (cit == cregs_.end()) fail(name, "unknown classical register '" + name.text + "'");
            size = cit->second;
        }
        if (cur_.kind == Tok::lbracket) {
            take();
            const Token idx = expect(Tok::integer, "register index");
            expect(Tok::rbracket, "']'");
            if (idx.int_value < 0 || idx.int_value >= size) {
                fail(idx, "index " + std::to_string(idx.int_value) + " out of range for '" +
                              name.text + "[" + std::to_string(size) + "]'");
            }
            return {base + static_cast<int>(idx.int_value), 1};
        }
        return {base, size};
    }

    void parse_gate_decl() {
        take();
        const Token name = expect(Tok::identifier, "gate name");
        if (builtin_signature(name.text) || gate_templates_.count(name.text)) {
            fail(name, "gate '" + name.text + "' already defined");
        }
        GateTemplate tmpl;
        if (cur_.kind == Tok::lparen) {
            take();
            if (cur_.kind != Tok::rparen) {
                tmpl.params.push_back(expect(Tok::identifier, "parameter name").text);
                while (cur_.kind == Tok::comma) {
                    take();
                    tmpl.params.push_back(expect(Tok::identifier, "parameter name").text);
                }
            }
            expect(Tok::rparen, "')'");
        }
        tmpl.args.push_back(expect(Tok::identifier, "argument name").text);
        while (cur_.kind == Tok::comma) {
            take();
            tmpl.args.push_back(expect(Tok::identifier, "argument name").text);
        }
        expect(Tok::lbrace, "'{'");
        while (cur_.kind != Tok::rbrace) {
            if (at_keyword("barrier")) {
                parse_barrier();
                continue;
            }
            BodyCall call;
            const Token callee = expect(Tok::identifier, "gate name");
            call.name = callee.text;
            call.line = callee.line;
            call.col = callee.col;
            const auto sig = builtin_signature(call.name);
            const auto user = gate_templates_.find(call.name);
            if (!sig && user == gate_templates_.end()) {
                fail(callee, "unknown gate '" + call.name + "'");
            }
            if (cur_.kind == Tok::lparen) {
                take();
                if (cur_.kind != Tok::rparen) {
                    call.params.push_back(parse_expr(&tmpl.params));
                    while (cur_.kind == Tok::comma) {
                        take();
                        call.params.push_back(parse_expr(&tmpl.params));
                    }
                }
                expect(Tok::rparen, "')'");
            }
            const int want_params = sig ? sig->n_params : static_cast<int>(user->second.params.size());
            const int want_args = sig ? sig->n_qubits : static_cast<int>(user->second.args.size());
            if (static_cast<int>(call.params.size()) != want_params) {
                fail(callee, "gate '" + call.name + "' expects " + std::to_string(want_params) +
                                 " parameter(s), got " + std::to_string(call.params.size()));
            }
            call.args.push_back(expect(Tok::identifier, "argument name").text);
            while (cur_.kind == Tok::comma) {
                take();
                call.args.push_back(expect(Tok::identifier, "argument name").text);
            }
            expect(Tok::semicolon, "';'");
            if (static_cast<int>(call.args.size()) != want_args) {
                fail(callee, "gate '" + call.name + "' expects " + std::to_string(want_args) +
                                 " operand(s), got " + std::to_string(call.args.size()));
            }
            for (const std::string& a : call.args) {
                if (std::find(tmpl.args.begin(), tmpl.args.end(), a) == tmpl.args.end()) {
                    fail(callee, "operand '" + a + "' is not an argument of the enclosing gate");
                }
            }
            tmpl.body.push_back(std::move(call));
        }
        expect(Tok::rbrace, "'}'");
        gate_templates_[name.text] = std::move(tmpl);
    }

    void parse_gate_call() {
        const Token name = take();
        const auto sig = builtin_signature(name.text);
        const auto user = gate_templates_.find(name.text);
        if (!sig && user == gate_templates_.end()) {
            fail(name, "unknown gate '" + name.text + "'");
        }
        std::vector<double> params;
        if (cur_.kind == Tok::lparen) {
            take();
            if (cur_.kind != Tok::rparen) {
                params.push_back(eval_const(parse_expr(nullptr), name));
                while (cur_.kind == Tok::comma) {
                    take();
                    params.push_back(eval_const(parse_expr(nullptr), name));
                }
            }
            expect(Tok::rparen, "')'");
        }
        const int want_params = sig ? sig->n_params : static_cast<int>(user->second.params.size());
        if (static_cast<int>(params.size()) != want_params) {
            fail(name, "gate '" + name.text + "' expects " + std::to_string(want_params) +
                           " parameter(s), got " + std::to_string(params.size()));
        }

        std::vector<std::pair<int, int>> operands;
        operands.push_back(parse_argument(true));
        while (cur_.kind == Tok::comma) {
            take();
            operands.push_back(parse_argument(true));
        }
        expect(Tok::semicolon, "';'");

        const int want_args = sig ? sig->n_qubits : static_cast<int>(user->second.args.size());
        if (static_cast<int>(operands.size()) != want_args) {
            fail(name, "gate '" + name.text + "' expects " + std::to_string(want_args) +
                           " operand(s), got " + std::to_string(operands.size()));
        }

        // whole-register operands broadcast; mixed sizes must agree
        int span = 1;
        for (const auto& [base, size] : operands) {
            (void)base;
            if (size > 1) {
                if (span > 1 && size != span) {
                    fail(name, "register operands of '" + name.text + "' have mismatched sizes");
                }
                span = size;
            }
        }
        for (int i = 0; i < span; ++i) {
            std::vector<int> qubits;
            qubits.reserve(operands.size());
            for (const auto& [base, size] : operands) {
                qubits.push_back(size == 1 ? base : base + i);
            }
            expand_call(name.text, params, qubits, name);
        }
    }

    void expand_call(const std::string& name, const std::vector<double>& params,
                     const std::vector<int>& qubits, const Token& at) {
        for (std::size_t i = 0; i < qubits.size(); ++i) {
            for (std::size_t j = i + 1; j < qubits.size(); ++j) {
                if (qubits[i] == qubits[j]) {
                    fail(at, "gate '" + name + "' applied to duplicate qubit q[" +
                                 std::to_string(qubits[i]) + "]");
                }
            }
        }
        if (builtin_signature(name)) {
            SourceStatement st;
            st.name = normalize_builtin(name);
            st.params = params;
            st.qubits = qubits;
            st.line = at.line;
            st.col = at.col;
            circuit_.statements.push_back(std::move(st));
            return;
        }
        const GateTemplate& tmpl = gate_templates_.at(name);
        std::map<std::string, double> env;
        for (std::size_t i = 0; i < tmpl.params.size(); ++i) env[tmpl.params[i]] = params[i];
        std::map<std::string, int> binding;
        for (std::size_t i = 0; i < tmpl.args.size(); ++i) binding[tmpl.args[i]] = qubits[i];
        for (const BodyCall& call : tmpl.body) {
            std::vector<double> sub_params;
            sub_params.reserve(call.params.size());
            for (const ExprPtr& e : call.params) {
                sub_params.push_back(eval_expr(*e, env, at));
            }
            std::vector<int> sub_qubits;
            sub_qubits.reserve(call.args.size());
            for (const std::string& a : call.args) sub_qubits.push_back(binding.at(a));
            expand_call(call.name, sub_params, sub_qubits, at);
        }
    }

    // expression grammar: exp := ['-'] term { ('+'|'-') term }
    ExprPtr parse_expr(const std::vector<std::string>* param_scope) {
        ExprPtr lhs;
        if (cur_.kind == Tok::minus) {
            take();
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::neg;
            e->lhs = parse_term(param_scope);
            lhs = e;
        } else {
            lhs = parse_term(param_scope);
        }
        while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
            const bool add = cur_.kind == Tok::plus;
            take();
            auto e = std::make_shared<Expr>();
            e->kind = add ? Expr::Kind::add : Expr::Kind::sub;
            e->lhs = lhs;
            e->rhs = parse_term(param_scope);
            lhs = e;
        }
        return lhs;
    }

    ExprPtr parse_term(const std::vector<std::string>* param_scope) {
        ExprPtr lhs = parse_factor(param_scope);
        while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
            const bool mul = cur_.kind == Tok::star;
            take();
            auto e = std::make_shared<Expr>();
            e->kind = mul ? Expr::Kind::mul : Expr::Kind::div;
            e->lhs = lhs;
            e->rhs = parse_factor(param_scope);
            lhs = e;
        }
        return lhs;
    }

    ExprPtr parse_factor(const std::vector<std::string>* param_scope) {
        ExprPtr lhs = parse_atom(param_scope);
        while (cur_.kind == Tok::caret) {
            take();
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::pow;
            e->lhs = lhs;
            e->rhs = parse_atom(param_scope);
            lhs = e;
        }
        return lhs;
    }

    ExprPtr parse_atom(const std::vector<std::string>* param_scope) {
        if (cur_.kind == Tok::minus) {
            take();
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::neg;
            e->lhs = parse_atom(param_scope);
            return e;
        }
        if (cur_.kind == Tok::real || cur_.kind == Tok::integer) {
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::number;
            e->value = take().real_value;
            return e;
        }
        if (cur_.kind == Tok::lparen) {
            take();
            ExprPtr inner = parse_expr(param_scope);
            expect(Tok::rparen, "')'");
            return inner;
        }
        if (cur_.kind == Tok::identifier) {
            const Token id = take();
            if (id.text == "pi") {
                auto e = std::make_shared<Expr>();
                e->kind = Expr::Kind::number;
                e->value = std::numbers::pi;
                return e;
            }
            if (id.text == "sin" || id.text == "cos" || id.text == "tan" || id.text == "exp" ||
                id.text == "ln" || id.text == "sqrt") {
                expect(Tok::lparen, "'('");
                auto e = std::make_shared<Expr>();
                e->kind = Expr::Kind::call;
                e->name = id.text;
                e->lhs = parse_expr(param_scope);
                expect(Tok::rparen, "')'");
                return e;
            }
            if (param_scope &&
                std::find(param_scope->begin(), param_scope->end(), id.text) != param_scope->end()) {
                auto e = std::make_shared<Expr>();
                e->kind = Expr::Kind::param;
                e->name = id.text;
                return e;
            }
            fail(id, "unknown identifier '" + id.text + "' in expression");
        }
        fail(cur_, "expected an expression");
    }

    double eval_expr(const Expr& e, const std::map<std::string, double>& env,
                     const Token& at) const {
        switch (e.kind) {
            case Expr::Kind::number: return e.value;
            case Expr::Kind::param: {
                const auto it = env.find(e.name);
                if (it == env.end()) {
                    fail(at, "unbound parameter '" + e.name + "'");
                }
                return it->second;
            }
            case Expr::Kind::add: return eval_expr(*e.lhs, env, at) + eval_expr(*e.rhs, env, at);
            case Expr::Kind::sub: return eval_expr(*e.lhs, env, at) - eval_expr(*e.rhs, env, at);
            case Expr::Kind::mul: return eval_expr(*e.lhs, env, at) * eval_expr(*e.rhs, env, at);
            case Expr::Kind::div: return eval_expr(*e.lhs, env, at) / eval_expr(*e.rhs, env, at);
            case Expr::Kind::pow:
                return std::pow(eval_expr(*e.lhs, env, at), eval_expr(*e.rhs, env, at));
            case Expr::Kind::neg: return -eval_expr(*e.lhs, env, at);
            case Expr::Kind::call: {
                const double v = eval_expr(*e.lhs, env, at);
                if (e.name == "sin") return std::sin(v);
                if (e.name == "cos") return std::cos(v);
                if (e.name == "tan") return std::tan(v);
                if (e.name == "exp") return std::exp(v);
                if (e.name == "ln") return std::log(v);
                return std::sqrt(v);
            }
        }
        return 0.0;
    }

    double eval_const(const ExprPtr& e, const Token& at) const {
        static const std::map<std::string, double> empty;
        return eval_expr(*e, empty, at);
    }

    Lexer lexer_;
    std::string file_;
    std::vector<Diagnostic>* warnings_;
    Token cur_;
    SourceCircuit circuit_;
    std::map<std::string, std::pair<int, int>> qregs_;  // name -> (offset, size)
    std::map<std::string, int> cregs_;
    std::map<std::string, GateTemplate> gate_templates_;
    int next_qubit_ = 0;
};

std::string render_label(const std::string& name, const std::vector<int>& qubits) {
    std::ostringstream out;
    out << name << " ";
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (i) out << ",";
        out << "q[" << qubits[i] << "]";
    }
    return out.str();
}

}  // namespace

SourceCircuit parse_qasm(std::string_view text, const ParseOptions& opts) {
    Parser parser(text, opts);
    return parser.parse();
}

SourceCircuit parse_qasm_file(const std::string& path, std::vector<Diagnostic>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    ParseOptions opts;
    opts.filename = path;
    opts.warnings = warnings;
    return parse_qasm(buf.str(), opts);
}

namespace {

void emit_unary(Circuit& out, const std::string& name, std::span<const double> params,
                int target) {
    Gate g;
    g.id = static_cast<std::uint32_t>(out.gates.size());
    g.kind = GateKind::unary;
    g.target = target;
    g.matrix = gate_matrix(name, params);
    g.label = render_label(name, {target});
    out.gates.push_back(std::move(g));
}

void emit_controlled(Circuit& out, const std::string& base_name, std::span<const double> params,
                     int control, int target, const std::string& label_name) {
    Gate g;
    g.id = static_cast<std::uint32_t>(out.gates.size());
    g.kind = GateKind::controlled;
    g.control = control;
    g.target = target;
    g.matrix = gate_matrix(base_name, params);
    g.label = render_label(label_name, {control, target});
    out.gates.push_back(std::move(g));
}

void emit_ccx(Circuit& out, int a, int b, int c) {
    // standard {h,t,tdg,cx} Toffoli decomposition
    emit_unary(out, "h", {}, c);
    emit_controlled(out, "x", {}, b, c, "cx");
    emit_unary(out, "tdg", {}, c);
    emit_controlled(out, "x", {}, a, c, "cx");
    emit_unary(out, "t", {}, c);
    emit_controlled(out, "x", {}, b, c, "cx");
    emit_unary(out, "tdg", {}, c);
    emit_controlled(out, "x", {}, a, c, "cx");
    emit_unary(out, "t", {}, b);
    emit_unary(out, "t", {}, c);
    emit_unary(out, "h", {}, c);
    emit_controlled(out, "x", {}, a, b, "cx");
    emit_unary(out, "t", {}, a);
    emit_unary(out, "tdg", {}, b);
    emit_controlled(out, "x", {}, a, b, "cx");
}

}  // namespace

Circuit lower(const SourceCircuit& source) {
    Circuit out;
    out.n_qubits = source.n_qubits;
    for (const SourceStatement& st : source.statements) {
        if (gate_param_count(st.name) >= 0) {
            emit_unary(out, st.name, st.params, st.qubits[0]);
        } else if (st.name == "cx") {
            emit_controlled(out, "x", {}, st.qubits[0], st.qubits[1], "cx");
        } else if (st.name == "cz") {
            emit_controlled(out, "z", {}, st.qubits[0], st.qubits[1], "cz");
        } else if (st.name == "ch") {
            emit_controlled(out, "h", {}, st.qubits[0], st.qubits[1], "ch");
        } else if (st.name == "cu1") {
            emit_controlled(out, "u1", st.params, st.qubits[0], st.qubits[1], "cu1");
        } else if (st.name == "crz") {
            emit_controlled(out, "rz", st.params, st.qubits[0], st.qubits[1], "crz");
        } else if (st.name == "swap") {
            emit_controlled(out, "x", {}, st.qubits[0], st.qubits[1], "cx");
            emit_controlled(out, "x", {}, st.qubits[1], st.qubits[0], "cx");
            emit_controlled(out, "x", {}, st.qubits[0], st.qubits[1], "cx");
        } else if (st.name == "ccx") {
            emit_ccx(out, st.qubits[0], st.qubits[1], st.qubits[2]);
        } else {
            throw std::invalid_argument("cannot lower gate '" + st.name + "' at line " +
                                        std::to_string(st.line));
        }
    }
    return out;
}

}  // namespace q2
