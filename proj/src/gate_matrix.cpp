#include "q2logic/gate_matrix.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace q2 {

namespace {

constexpr double kPi = std::numbers::pi;

GateMatrix u3(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return GateMatrix{
        {c, 0.0},
        -std::exp(cdouble{0.0, lambda}) * s,
        std::exp(cdouble{0.0, phi}) * s,
        std::exp(cdouble{0.0, phi + lambda}) * c,
    };
}

}  // namespace

bool GateMatrix::is_unitary(double tol) const {
    // M * M^dagger == I, elementwise
    const cdouble a = m00 * std::conj(m00) + m01 * std::conj(m01);
    const cdouble b = m00 * std::conj(m10) + m01 * std::conj(m11);
    const cdouble c = m10 * std::conj(m00) + m11 * std::conj(m01);
    const cdouble d = m10 * std::conj(m10) + m11 * std::conj(m11);
    return std::abs(a - cdouble{1.0, 0.0}) <= tol && std::abs(b) <= tol &&
           std::abs(c) <= tol && std::abs(d - cdouble{1.0, 0.0}) <= tol;
}

bool GateMatrix::approx_equal(const GateMatrix& other, double tol) const {
    return std::abs(m00 - other.m00) <= tol && std::abs(m01 - other.m01) <= tol &&
           std::abs(m10 - other.m10) <= tol && std::abs(m11 - other.m11) <= tol;
}

int gate_param_count(std::string_view name) {
    if (name == "id" || name == "x" || name == "y" || name == "z" || name == "h" ||
        name == "s" || name == "sdg" || name == "t" || name == "tdg") {
        return 0;
    }
    if (name == "rx" || name == "ry" || name == "rz" || name == "u1") return 1;
    if (name == "u2") return 2;
    if (name == "u3" || name == "U") return 3;
    return -1;
}

GateMatrix gate_matrix(std::string_view name, std::span<const double> params) {
    const int arity = gate_param_count(name);
    if (arity < 0) {
        throw std::invalid_argument("unknown unary gate: " + std::string(name));
    }
    if (static_cast<int>(params.size()) != arity) {
        throw std::invalid_argument("gate " + std::string(name) + " expects " +
                                    std::to_string(arity) + " parameter(s), got " +
                                    std::to_string(params.size()));
    }

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    if (name == "id") return GateMatrix::identity();
    if (name == "x") return {{0, 0}, {1, 0}, {1, 0}, {0, 0}};
    if (name == "y") return {{0, 0}, {0, -1}, {0, 1}, {0, 0}};
    if (name == "z") return {{1, 0}, {0, 0}, {0, 0}, {-1, 0}};
    if (name == "h") return {{inv_sqrt2, 0}, {inv_sqrt2, 0}, {inv_sqrt2, 0}, {-inv_sqrt2, 0}};
    if (name == "s") return {{1, 0}, {0, 0}, {0, 0}, {0, 1}};
    if (name == "sdg") return {{1, 0}, {0, 0}, {0, 0}, {0, -1}};
    if (name == "t") return {{1, 0}, {0, 0}, {0, 0}, std::exp(cdouble{0.0, kPi / 4})};
    if (name == "tdg") return {{1, 0}, {0, 0}, {0, 0}, std::exp(cdouble{0.0, -kPi / 4})};
    if (name == "rx") {
        const double c = std::cos(params[0] / 2.0), s = std::sin(params[0] / 2.0);
        return {{c, 0}, {0, -s}, {0, -s}, {c, 0}};
    }
    if (name == "ry") {
        const double c = std::cos(params[0] / 2.0), s = std::sin(params[0] / 2.0);
        return {{c, 0}, {-s, 0}, {s, 0}, {c, 0}};
    }
    if (name == "rz") {
        return {std::exp(cdouble{0.0, -params[0] / 2}), {0, 0}, {0, 0},
                std::exp(cdouble{0.0, params[0] / 2})};
    }
    if (name == "u1") return u3(0.0, 0.0, params[0]);
    if (name == "u2") return u3(kPi / 2, params[0], params[1]);
    // u3 / U
    return u3(params[0], params[1], params[2]);
}

}  // namespace q2
