#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mrsim/mat2.hpp"

using namespace mrsim;

namespace {

// Independent oracle: matrix exponential by Taylor series of -i*angle*(axis.I)
Mat2 expm_taylor(const std::array<double, 3>& axis, double angle) {
    const Mat2 gen = Complex(0.0, -angle) *
                     (axis[0] * spin::Ix + axis[1] * spin::Iy + axis[2] * spin::Iz);
    Mat2 sum = Mat2::identity();
    Mat2 term = Mat2::identity();
    for (int k = 1; k < 60; ++k) {
        term = term * gen * Complex(1.0 / k);
        sum = sum + term;
    }
    return sum;
}

std::array<double, 3> random_axis(std::mt19937_64& g) {
    std::normal_distribution<double> n;
    double x = n(g), y = n(g), z = n(g);
    const double r = std::sqrt(x * x + y * y + z * z);
    return {x / r, y / r, z / r};
}

}  // namespace

TEST_CASE("spin operators satisfy su(2) commutators") {
    const Complex i(0.0, 1.0);
    const Mat2 comm_xy = spin::Ix * spin::Iy - spin::Iy * spin::Ix;
    const Mat2 comm_yz = spin::Iy * spin::Iz - spin::Iz * spin::Iy;
    const Mat2 comm_zx = spin::Iz * spin::Ix - spin::Ix * spin::Iz;
    CHECK(comm_xy.max_abs_diff(i * spin::Iz) < 1e-15);
    CHECK(comm_yz.max_abs_diff(i * spin::Ix) < 1e-15);
    CHECK(comm_zx.max_abs_diff(i * spin::Iy) < 1e-15);
    // spin-1/2 normalization: Ix^2 = Id/4
    CHECK((spin::Ix * spin::Ix).max_abs_diff(0.25 * Mat2::identity()) < 1e-15);
}

TEST_CASE("expm_su2 matches the Taylor-series oracle") {
    std::mt19937_64 g(12345);
    std::uniform_real_distribution<double> ang(-8.0, 8.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto axis = random_axis(g);
        const double a = ang(g);
        CHECK(expm_su2(axis, a).max_abs_diff(expm_taylor(axis, a)) < 1e-12);
    }
}

TEST_CASE("expm_su2 is unitary with unit determinant") {
    std::mt19937_64 g(99);
    for (int trial = 0; trial < 50; ++trial) {
        const auto axis = random_axis(g);
        const Mat2 u = expm_su2(axis, 1.7 + trial * 0.21);
        CHECK((u * u.adjoint()).max_abs_diff(Mat2::identity()) < 1e-14);
        CHECK(std::abs(u.det() - Complex(1.0)) < 1e-14);
    }
}

TEST_CASE("same-axis rotations compose by angle addition") {
    std::mt19937_64 g(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto axis = random_axis(g);
        const double a = 0.3 + trial * 0.1, b = 1.1 - trial * 0.07;
        const Mat2 lhs = expm_su2(axis, a) * expm_su2(axis, b);
        CHECK(lhs.max_abs_diff(expm_su2(axis, a + b)) < 1e-13);
    }
}

TEST_CASE("a 2 pi rotation flips the spinor sign") {
    const Mat2 u = expm_su2({0.0, 0.0, 1.0}, 2.0 * std::numbers::pi);
    CHECK(u.max_abs_diff(Complex(-1.0) * Mat2::identity()) < 1e-14);
    const Mat2 u4 = expm_su2({1.0, 0.0, 0.0}, 4.0 * std::numbers::pi);
    CHECK(u4.max_abs_diff(Mat2::identity()) < 1e-13);
}

TEST_CASE("expm_su2 rejects bad input") {
    CHECK_THROWS_AS(expm_su2({1.0, 1.0, 0.0}, 0.5), std::domain_error);
    CHECK_THROWS_AS(expm_su2({0.0, 0.0, 0.0}, 0.5), std::domain_error);
    CHECK_THROWS_AS(expm_su2({0.0, 0.0, 1.0}, std::nan("")), std::domain_error);
}

TEST_CASE("density matrix validation and Bloch round trip") {
    const DensityMatrix mm = DensityMatrix::maximally_mixed();
    CHECK(mm.purity() == doctest::Approx(0.5).epsilon(1e-14));

    const DensityMatrix r = DensityMatrix::from_bloch(0.3, -0.4, 0.5);
    const auto b = r.bloch();
    CHECK(b[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(b[1] == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(b[2] == doctest::Approx(0.5).epsilon(1e-12));

    // pure state has purity 1
    CHECK(DensityMatrix::from_bloch(0.0, 0.0, 1.0).purity() ==
          doctest::Approx(1.0).epsilon(1e-14));

    // invalid matrices are rejected
    CHECK_THROWS_AS(DensityMatrix(Mat2{0.6, 0.0, 0.0, 0.6}), std::domain_error);  // trace
    CHECK_THROWS_AS(DensityMatrix(Mat2{0.5, Complex(0, 0.2), Complex(0, 0.2), 0.5}),
                    std::domain_error);  // not Hermitian
    CHECK_THROWS_AS(DensityMatrix(Mat2{0.5, 0.9, 0.9, 0.5}), std::domain_error);  // negative
    CHECK_THROWS_AS(DensityMatrix::from_bloch(1.2, 0.0, 0.0), std::domain_error);
}
