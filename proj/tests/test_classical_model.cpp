#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mrsim/classical_model.hpp"

using namespace mrsim;
using std::numbers::pi;

namespace {

// Gauss-Legendre-free sphere quadrature: midpoint rule over (cos theta, phi),
// accurate enough at 400x400 for the smooth integrands used here.
template <class F>
double sphere_average(F&& f, int n = 400) {
    double sum = 0.0;
    for (int a = 0; a < n; ++a) {
        const double ct = -1.0 + (a + 0.5) * 2.0 / n;
        const double th = std::acos(ct);
        for (int b = 0; b < n; ++b) {
            const double ph = (b + 0.5) * 2.0 * pi / n;
            sum += f(ClassicalSpinState{th, ph});
        }
    }
    return sum / double(n) / double(n);
}

}  // namespace

TEST_CASE("uniform sphere sampling has the right moments") {
    Substream rng(123, 0xAB, 0);
    const int n = 200000;
    double sz = 0, sz2 = 0, sx = 0, sx2 = 0;
    for (int s = 0; s < n; ++s) {
        const auto spin = sample_uniform_spin(rng);
        const double z = std::cos(spin.theta);
        const double x = std::sin(spin.theta) * std::cos(spin.phi);
        sz += z;
        sz2 += z * z;
        sx += x;
        sx2 += x * x;
    }
    // <z> = <x> = 0, <z^2> = <x^2> = 1/3 for the uniform sphere
    CHECK(std::abs(sz / n) < 0.01);
    CHECK(std::abs(sx / n) < 0.01);
    CHECK(sz2 / n == doctest::Approx(1.0 / 3).epsilon(0.02));
    CHECK(sx2 / n == doctest::Approx(1.0 / 3).epsilon(0.02));
}

TEST_CASE("accumulated phase matches numerical integration of the coupling") {
    const ModelParams p{2.0 * pi, 4.4 * pi, 0.05};
    const ClassicalSpinState s{1.1, 2.3};
    for (double t : {0.05, 0.4, 1.7, 3.9}) {
        // oracle: A_perp * integral over the contact of I_x(u) = sin(theta) cos(omega u + phi)
        const int steps = 20000;
        double integral = 0.0;
        for (int m = 0; m < steps; ++m) {
            const double u = (t - p.tau) + (m + 0.5) * p.tau / steps;
            integral += std::sin(s.theta) * std::cos(p.omega * u + s.phi) * p.tau / steps;
        }
        CHECK(phase_accumulated(s, t, p) == doctest::Approx(p.a_perp * integral).epsilon(1e-7));
    }
    CHECK_THROWS_AS(phase_accumulated(s, 0.01, p), std::domain_error);
}

TEST_CASE("classical WSL pair correlation matches sphere quadrature") {
    const ModelParams p = ModelParams::main_text_preset(0.001);
    const double t1 = 0.3, delta = 1.9;  // output times, phase delay = omega * dt
    const double t2 = t1 + delta / p.omega;
    const double quad = sphere_average([&](const ClassicalSpinState& s) {
        return classical_output(s, t1, p) * classical_output(s, t2, p);
    });
    const double closed = classical_wsl_corr2(delta, p);
    CHECK(quad == doctest::Approx(closed).epsilon(5e-3));
}

TEST_CASE("classical WSL fourth-order correlation matches sphere quadrature") {
    const ModelParams p = ModelParams::main_text_preset(0.001);
    const PhaseDelays d{1.3, 2.1, 0.7};
    const double ti = 0.3;
    const double tj = ti + d.t_ji / p.omega;
    const double tk = tj + d.t_kj / p.omega;
    const double tl = tk + d.t_lk / p.omega;
    const double quad = sphere_average([&](const ClassicalSpinState& s) {
        return classical_output(s, ti, p) * classical_output(s, tj, p) *
               classical_output(s, tk, p) * classical_output(s, tl, p);
    });
    const double closed = classical_wsl_corr4(d, p);
    CHECK(quad == doctest::Approx(closed).epsilon(1e-2));
}

TEST_CASE("classical closed-form limit: values and degeneracy guard") {
    // (0,0,0): num = sqrt(15)/6 * |1+1+1-1| = sqrt(15)/3; den = sqrt(3) -> sqrt(5)/3
    CHECK(classical_v_limit({0.0, 0.0, 0.0}) ==
          doctest::Approx(std::sqrt(5.0) / 3.0).epsilon(1e-14));
    // optimal quantum delays give a sub-unity classical value
    CHECK(classical_v_limit(PhaseDelays::max_violation()) ==
          doctest::Approx(0.8784).epsilon(1e-3));
    // denominator zero: a = cos(pi/2)... choose t_ji+t_kj = pi etc. -> a=... use
    // the known degenerate point (1.25 pi, 0.25 pi, 0.25 pi)
    CHECK_THROWS_AS(classical_v_limit({1.25 * pi, 0.25 * pi, 0.25 * pi}), std::domain_error);
}

TEST_CASE("classical signals reproduce the closed-form ratio") {
    const ModelParams p = ModelParams::main_text_preset(0.01);
    for (const PhaseDelays& d :
         {PhaseDelays{0.4, 1.9, 3.3}, PhaseDelays{2.8, 0.9, 5.1}, PhaseDelays{1.0, 1.0, 1.0}}) {
        const ClassicalSignals s = classical_wsl_signals(d, p);
        CHECK(s.v == doctest::Approx(classical_v_limit(d)).epsilon(1e-12));
    }
}

TEST_CASE("classical maximum stays below 1 on a coarse grid") {
    const ClassicalScanResult r = classical_scan_max(48);
    CHECK(r.grid_max < 1.0);
    CHECK(r.refined_max < 1.0);
    CHECK(r.refined_max > 0.85);
}

TEST_CASE("classical outputs have zero mean over the sphere") {
    const ModelParams p = ModelParams::main_text_preset(0.02);
    const double mean = sphere_average(
        [&](const ClassicalSpinState& s) { return classical_output(s, 0.7, p); }, 200);
    CHECK(std::abs(mean) < 1e-10);
}

TEST_CASE("classical shot simulation is deterministic and thread invariant") {
    const ModelParams p = ModelParams::main_text_preset(0.01);
    const auto sched = MeasurementSchedule::four_point(PhaseDelays::max_violation(), p);
    const auto a = simulate_classical(sched, p, 5000, 77, 1);
    const auto b = simulate_classical(sched, p, 5000, 77, 4);
    CHECK(a == b);
    const auto c = simulate_classical(sched, p, 5000, 78, 1);
    CHECK(a != c);
}
