#pragma once

#include <complex>
#include <span>
#include <string_view>

namespace q2 {

using cdouble = std::complex<double>;

// 2x2 complex unitary, row-major. Frontend math stays in double precision;
// truncation to single precision happens only at bitstream encoding and on
// the device path.
struct GateMatrix {
    cdouble m00{1.0, 0.0};
    cdouble m01{0.0, 0.0};
    cdouble m10{0.0, 0.0};
    cdouble m11{1.0, 0.0};

    static GateMatrix identity() { return GateMatrix{}; }

    bool is_unitary(double tol = 1e-9) const;
    bool approx_equal(const GateMatrix& other, double tol) const;
};

// Standard qelib1 matrix for a unary gate name.
// u3(theta,phi,lambda) = [[cos(t/2), -e^{il}sin(t/2)], [e^{ip}sin(t/2), e^{i(p+l)}cos(t/2)]],
// u1(l) = u3(0,0,l), u2(p,l) = u3(pi/2,p,l).
// Throws std::invalid_argument on unknown name or wrong parameter arity.
GateMatrix gate_matrix(std::string_view name, std::span<const double> params);

// Expected parameter count for a supported unary gate name, -1 if unknown.
int gate_param_count(std::string_view name);

}  // namespace q2
