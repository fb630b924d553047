#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace mrsim {

using Complex = std::complex<double>;

/// Dense complex 2x2 matrix, row-major. The only matrix type the engine
/// needs; everything is closed-form at this dimension.
struct Mat2 {
    std::array<Complex, 4> e{};  // [a b; c d] -> {a, b, c, d}

    constexpr Mat2() = default;
    constexpr Mat2(Complex a, Complex b, Complex c, Complex d) : e{a, b, c, d} {}

    static constexpr Mat2 zero() { return {}; }
    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Complex operator()(int r, int c) const { return e[2 * r + c]; }
    Complex& operator()(int r, int c) { return e[2 * r + c]; }

    Mat2 operator+(const Mat2& o) const {
        return {e[0] + o.e[0], e[1] + o.e[1], e[2] + o.e[2], e[3] + o.e[3]};
    }
    Mat2 operator-(const Mat2& o) const {
        return {e[0] - o.e[0], e[1] - o.e[1], e[2] - o.e[2], e[3] - o.e[3]};
    }
    Mat2 operator*(const Mat2& o) const {
        return {e[0] * o.e[0] + e[1] * o.e[2], e[0] * o.e[1] + e[1] * o.e[3],
                e[2] * o.e[0] + e[3] * o.e[2], e[2] * o.e[1] + e[3] * o.e[3]};
    }
    Mat2 operator*(Complex s) const { return {s * e[0], s * e[1], s * e[2], s * e[3]}; }
    friend Mat2 operator*(Complex s, const Mat2& m) { return m * s; }

    Mat2 adjoint() const {
        return {std::conj(e[0]), std::conj(e[2]), std::conj(e[1]), std::conj(e[3])};
    }
    Complex trace() const { return e[0] + e[3]; }
    Complex det() const { return e[0] * e[3] - e[1] * e[2]; }

    /// max |entry| of (this - other)
    double max_abs_diff(const Mat2& o) const {
        double m = 0.0;
        for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(e[i] - o.e[i]));
        return m;
    }
    double max_abs() const { return max_abs_diff(zero()); }

    /// U X U^dag
    Mat2 conjugate_by(const Mat2& u) const { return u * (*this) * u.adjoint(); }
};

/// Spin-1/2 operators, hbar = 1, eigenvalues +-1/2.
namespace spin {
inline const Mat2 Ix{0.0, 0.5, 0.5, 0.0};
inline const Mat2 Iy{0.0, Complex(0.0, -0.5), Complex(0.0, 0.5), 0.0};
inline const Mat2 Iz{0.5, 0.0, 0.0, -0.5};
}  // namespace spin

/// exp(-i * angle * (axis . I)) for a unit axis, via the spin-1/2 closed form
/// cos(angle/2) Id - 2 i sin(angle/2) (axis . I).
Mat2 expm_su2(const std::array<double, 3>& axis, double angle);

/// 2x2 density matrix with validity checks (Hermitian, unit trace, PSD).
class DensityMatrix {
  public:
    explicit DensityMatrix(const Mat2& m);
    static DensityMatrix maximally_mixed() { return DensityMatrix(Mat2{0.5, 0.0, 0.0, 0.5}); }
    /// rho = 1/2 (Id + bx sx + by sy + bz sz); |b| <= 1
    static DensityMatrix from_bloch(double bx, double by, double bz);

    const Mat2& mat() const { return mat_; }
    std::array<double, 3> bloch() const;
    double purity() const { return std::real((mat_ * mat_).trace()); }

  private:
    Mat2 mat_;
};

}  // namespace mrsim
