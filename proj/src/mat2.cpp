#include "mrsim/mat2.hpp"

namespace mrsim {

Mat2 expm_su2(const std::array<double, 3>& axis, double angle) {
    const double n2 = axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2];
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
        throw std::domain_error("expm_su2: rotation axis must be a unit vector");
    if (!std::isfinite(angle)) throw std::domain_error("expm_su2: non-finite angle");
    const Mat2 n_dot_i = axis[0] * spin::Ix + axis[1] * spin::Iy + axis[2] * spin::Iz;
    const Complex two_i_sin(0.0, 2.0 * std::sin(angle / 2.0));
    return std::cos(angle / 2.0) * Mat2::identity() - two_i_sin * n_dot_i;
}

DensityMatrix::DensityMatrix(const Mat2& m) : mat_(m) {
    if (m.max_abs_diff(m.adjoint()) > 1e-12)
        throw std::domain_error("DensityMatrix: not Hermitian");
    if (std::abs(m.trace() - Complex(1.0)) > 1e-12)
        throw std::domain_error("DensityMatrix: trace != 1");
    // eigenvalues of a Hermitian 2x2 with unit trace: 1/2 +- sqrt((a-d)^2/4 + |b|^2)
    const double half_gap = std::sqrt(std::norm(m.e[0] - m.e[3]) / 4.0 + std::norm(m.e[1]));
    if (0.5 - half_gap < -1e-10)
        throw std::domain_error("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::from_bloch(double bx, double by, double bz) {
    Mat2 m = 0.5 * Mat2::identity() + bx * spin::Ix + by * spin::Iy + bz * spin::Iz;
    return DensityMatrix(m);
}

std::array<double, 3> DensityMatrix::bloch() const {
    // b_a = 2 Tr(rho I_a)  (with I_a eigenvalues +-1/2, trace scale 2)
    return {2.0 * std::real((mat_ * spin::Ix).trace()),
            2.0 * std::real((mat_ * spin::Iy).trace()),
            2.0 * std::real((mat_ * spin::Iz).trace())};
}

}  // namespace mrsim
