#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mrsim/classical_model.hpp"
#include "mrsim/inequality.hpp"
#include "mrsim/quantum_exact.hpp"

using namespace mrsim;
using std::numbers::pi;

namespace {

// assemble a CorrelationSet from the quantum WSL closed forms (pairs cos,
// quadruples by the exact pair factorization)
CorrelationSet quantum_wsl_set(const PhaseDelays& d, const ModelParams& p) {
    CorrelationSet c(SourceTag::ClosedForm);
    const double u = p.a_perp * p.a_perp * p.tau * p.tau;
    auto pair = [&](double delta) { return u * std::cos(delta); };
    c.set({"i", "j"}, pair(d.t_ji));
    c.set({"j", "k"}, pair(d.t_kj));
    c.set({"i", "l"}, pair(d.t_li()));
    c.set({"k", "l"}, pair(d.t_lk));
    // C_{a,b,c,e} = C_{ab} C_{ce}; twin pairs have zero delay
    c.set({"i", "i+", "j", "j+"}, pair(0) * pair(0));
    c.set({"j", "j+", "k", "k+"}, pair(0) * pair(0));
    c.set({"i", "i+", "l", "l+"}, pair(0) * pair(0));
    c.set({"k", "k+", "l", "l+"}, pair(0) * pair(0));
    c.set({"i", "j", "j+", "k"}, pair(d.t_ji) * pair(d.t_kj));
    c.set({"i", "k", "l", "l+"}, pair(d.t_ki()) * pair(0));
    c.set({"i", "i+", "j", "l"}, pair(0) * pair(d.t_lj()));
    c.set({"j", "k", "k+", "l"}, pair(d.t_kj) * pair(d.t_lk));
    return c;
}

CorrelationSet classical_wsl_set(const PhaseDelays& d, const ModelParams& p) {
    CorrelationSet c(SourceTag::ClosedForm);
    auto pair = [&](double delta) { return classical_wsl_corr2(delta, p); };
    c.set({"i", "j"}, pair(d.t_ji));
    c.set({"j", "k"}, pair(d.t_kj));
    c.set({"i", "l"}, pair(d.t_li()));
    c.set({"k", "l"}, pair(d.t_lk));
    // quadruples via the three-pairing closed form; twin delays are zero
    auto quad = [&](double dji, double dkj, double dlk) {
        return classical_wsl_corr4({dji, dkj, dlk}, p);
    };
    c.set({"i", "i+", "j", "j+"}, quad(0, d.t_ji, 0));
    c.set({"j", "j+", "k", "k+"}, quad(0, d.t_kj, 0));
    c.set({"i", "i+", "l", "l+"}, quad(0, d.t_li(), 0));
    c.set({"k", "k+", "l", "l+"}, quad(0, d.t_lk, 0));
    c.set({"i", "j", "j+", "k"}, quad(d.t_ji, 0, d.t_kj));
    c.set({"i", "k", "l", "l+"}, quad(d.t_ki(), d.t_lk, 0));
    c.set({"i", "i+", "j", "l"}, quad(0, d.t_ji, d.t_lj()));
    c.set({"j", "k", "k+", "l"}, quad(d.t_kj, 0, d.t_lk));
    return c;
}

}  // namespace

TEST_CASE("quantum closed-form assembly reproduces the limit formula") {
    std::mt19937_64 g(314);
    std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
    const ModelParams p = ModelParams::main_text_preset(0.023);
    for (int trial = 0; trial < 200; ++trial) {
        const PhaseDelays d{u(g), u(g), u(g)};
        const CorrelationSet c = quantum_wsl_set(d, p);
        const DResult dr = compute_d(c);
        if (dr.value < 1e-10) continue;
        const TestStatistics s = compute_v(c);
        CHECK(s.v == doctest::Approx(wsl_v_limit_quantum(d)).epsilon(1e-12));
    }
    // the flagship value
    const TestStatistics s = compute_v(quantum_wsl_set(PhaseDelays::max_violation(), p));
    CHECK(s.v == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("classical closed-form assembly reproduces the limit formula") {
    std::mt19937_64 g(2718);
    std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
    const ModelParams p = ModelParams::main_text_preset(0.01);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const PhaseDelays d{u(g), u(g), u(g)};
        double ref;
        try {
            ref = classical_v_limit(d);
        } catch (const std::domain_error&) {
            continue;
        }
        const CorrelationSet c = classical_wsl_set(d, p);
        const TestStatistics s = compute_v(c);
        CHECK(s.v == doctest::Approx(ref).epsilon(1e-10));
        ++checked;
    }
    CHECK(checked > 150);
}

TEST_CASE("compute_n handles the documented corner cases") {
    const ModelParams p = ModelParams::main_text_preset(0.023);
    const double u = p.a_perp * p.a_perp * p.tau * p.tau;
    // optimal delays: |cos(2pi/3) + cos(pi) + cos(2pi/3+pi+5pi/3) - cos(5pi/3)| = 2.5
    const ValueError n = compute_n(quantum_wsl_set(PhaseDelays::max_violation(), p));
    CHECK(n.value == doctest::Approx(2.5 * u).epsilon(1e-12));
    // zero delays
    const ValueError n0 = compute_n(quantum_wsl_set({0, 0, 0}, p));
    CHECK(n0.value == doctest::Approx(2.0 * u).epsilon(1e-12));
    // all pairs zero
    CorrelationSet z(SourceTag::ClosedForm);
    for (const auto& t : nd_pair_tuples()) z.set(t, 0.0);
    CHECK(compute_n(z).value == 0.0);
    // missing tuple
    CorrelationSet partial(SourceTag::ClosedForm);
    partial.set({"i", "j"}, 1.0);
    CHECK_THROWS_AS(compute_n(partial), std::domain_error);
}

TEST_CASE("compute_d handles the documented corner cases") {
    const ModelParams p = ModelParams::main_text_preset(0.023);
    const CorrelationSet c = quantum_wsl_set(PhaseDelays::max_violation(), p);
    const DResult d = compute_d(c);
    const double u = p.a_perp * p.a_perp * p.tau * p.tau;
    CHECK(d.a_term == doctest::Approx(4.0 * u * u).epsilon(1e-12));
    CHECK(d.b_term == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(d.value == doctest::Approx(2.0 * u).epsilon(1e-12));
    CHECK(d.value * d.value == doctest::Approx(0.0409).epsilon(0.02));
    CHECK(!d.ab_negative);

    // all quadruples zero -> 0 with unreliable-error flag
    CorrelationSet z(SourceTag::ClosedForm);
    for (const auto& t : nd_quad_tuples()) z.set(t, 0.0, 0.1);
    const DResult dz = compute_d(z);
    CHECK(dz.value == 0.0);
    CHECK(dz.error_unreliable);
}

TEST_CASE("fit_scaling recovers exact power laws and rejects bad input") {
    std::vector<std::pair<double, double>> pts;
    for (double t : {0.01, 0.02, 0.04, 0.08, 0.16}) pts.emplace_back(t, 3.7 * t * t * t);
    const ScalingFit f = fit_scaling(pts);
    CHECK(f.slope == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.7).epsilon(1e-10));
    CHECK(f.residual < 1e-10);
    CHECK(f.used_points == 5);

    // non-positive signals are dropped; fewer than 3 left -> error
    pts[0].second = 0.0;
    pts[1].second = -1.0;
    CHECK(fit_scaling(pts).used_points == 3);
    pts[2].second = 0.0;
    CHECK_THROWS_AS(fit_scaling(pts), std::domain_error);
    CHECK_THROWS_AS(fit_scaling({{0.0, 1.0}, {0.1, 1.0}, {0.2, 1.0}}), std::domain_error);
}

TEST_CASE("verdict logic and monotonicity in the error") {
    TestStatistics s;
    s.v = 1.25;
    s.dv = 0.01;
    s.slope_n = 2.01;
    s.slope_d = 1.98;
    s.slopes_set = true;
    CHECK(verdict(s) == Verdict::Violation);
    // wrong scaling -> inconclusive regardless of V
    TestStatistics bad = s;
    bad.slope_n = 1.5;
    CHECK(verdict(bad) == Verdict::Inconclusive);
    bad.slope_n = 2.01;
    bad.slope_d = 1.5;
    CHECK(verdict(bad) == Verdict::Inconclusive);
    // no slopes -> inconclusive
    TestStatistics ns = s;
    ns.slopes_set = false;
    CHECK(verdict(ns) == Verdict::Inconclusive);
    // sub-unity value with tight errors -> no violation
    TestStatistics low = s;
    low.v = 0.9;
    CHECK(verdict(low) == Verdict::NoViolation);
    // increasing dv can only weaken the verdict, never create a violation
    Verdict prev = verdict(s);
    for (double dv : {0.02, 0.05, 0.1, 0.5, 2.0}) {
        TestStatistics t = s;
        t.dv = dv;
        const Verdict now = verdict(t);
        if (prev != Verdict::Violation) CHECK(now != Verdict::Violation);
        prev = now;
    }
}

TEST_CASE("noise budget reproduces the documented acquisition time") {
    // gamma = 1/(10 ns) = 100 / us, eta = 0.03, A_perp = 2.3 omega, tau/Tp = 0.023
    const ModelParams p = ModelParams::snr_preset(0.023);
    const NoiseBudget budget(100.0, 0.03, 10.0 * 3600.0 * 1e6, 5.0);
    const double t_us = required_acquisition_time(budget, p, 5.0);
    const double hours = t_us / 3600.0 / 1e6;
    CHECK(hours == doctest::Approx(3.0).epsilon(0.2));

    // R = 0 -> 0; R scaling quadratic; eta halved -> 16x
    CHECK(required_acquisition_time(budget, p, 0.0) == 0.0);
    CHECK(required_acquisition_time(budget, p, 10.0) ==
          doctest::Approx(4.0 * t_us).epsilon(1e-12));
    const NoiseBudget half_eta(100.0, 0.015, budget.t_total, 5.0);
    CHECK(required_acquisition_time(half_eta, p, 5.0) ==
          doctest::Approx(16.0 * t_us).epsilon(1e-10));
}

TEST_CASE("noise sigma: scaling, dominance, and T dependence") {
    const ModelParams p = ModelParams::snr_preset(0.023);
    TestStatistics s;
    const double u = p.a_perp * p.a_perp * p.tau * p.tau;
    s.d = 2.0 * u;
    s.v = 1.25;
    s.n = s.v * s.d;
    const NoiseBudget b(100.0, 0.03, 10.0 * 3600.0 * 1e6, 5.0);
    const NoisePrediction np = noise_sigma_v(b, p, s);
    CHECK(np.dv_full > 0.0);
    // chi tau = 3 * 0.023 << 1: full expression dominates its approximation
    CHECK(np.dv_full >= np.dv_dominant);
    CHECK(np.dv_full < 2.0 * np.dv_dominant);
    // untruncated propagation keeps the (1 + chi tau / 2) readout factors, so
    // it always exceeds the short-tau closed form; converges as chi tau -> 0
    CHECK(np.dv_propagated > np.dv_full);
    const ModelParams p_tiny = ModelParams::snr_preset(0.0005);
    TestStatistics s_tiny = s;
    const double u_tiny = p_tiny.a_perp * p_tiny.a_perp * p_tiny.tau * p_tiny.tau;
    s_tiny.d = 2.0 * u_tiny;
    s_tiny.n = s_tiny.v * s_tiny.d;
    const NoisePrediction np_tiny = noise_sigma_v(b, p_tiny, s_tiny);
    const double gap = np.dv_propagated / np.dv_full;
    const double gap_tiny = np_tiny.dv_propagated / np_tiny.dv_full;
    CHECK(gap_tiny < gap);
    CHECK(gap_tiny < 1.35);  // sqrt(20/12) quadrature-weight floor ~ 1.29
    // quadrupling T halves the error
    const NoiseBudget b4(100.0, 0.03, 4.0 * b.t_total, 5.0);
    CHECK(noise_sigma_v(b4, p, s).dv_full ==
          doctest::Approx(np.dv_full / 2.0).epsilon(1e-12));
    // budget validation
    CHECK_THROWS_AS(NoiseBudget(0.0, 0.03, 1.0, 5.0), std::domain_error);
    CHECK_THROWS_AS(NoiseBudget(100.0, 1.5, 1.0, 5.0), std::domain_error);
}

TEST_CASE("statistics serialize to the documented JSON keys") {
    TestStatistics s;
    s.n = 0.25;
    s.d = 0.2;
    s.v = 1.25;
    s.verdict = Verdict::Violation;
    const std::string j = s.to_json();
    for (const char* key : {"\"n\":", "\"d\":", "\"v\":", "\"a_term\":", "\"b_term\":",
                            "\"dn\":", "\"dd\":", "\"dv\":", "\"slope_n\":", "\"slope_d\":",
                            "\"verdict\":"})
        CHECK(j.find(key) != std::string::npos);
    CHECK(j.find("\"verdict\":\"violation\"") != std::string::npos);
}

TEST_CASE("synthetic positive-measure models never violate the bound") {
    // Explicit positive joint distribution over K spin states with
    // deterministic bounded outputs per window: by construction a
    // macrorealist model, so V <= 1 exactly in the WSL assembly.
    std::mt19937_64 g(777);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> um(-1.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const int k_states = 2 + int(u01(g) * 6.0);
        std::vector<double> prob(k_states);
        double norm = 0.0;
        for (auto& q : prob) {
            q = 0.05 + u01(g);
            norm += q;
        }
        for (auto& q : prob) q /= norm;
        // outputs r[s][w] for the four windows; twins replay the window value
        std::vector<std::array<double, 4>> r(k_states);
        for (auto& row : r)
            for (auto& x : row) x = um(g);

        auto corr2 = [&](int a, int b) {
            double c = 0;
            for (int s = 0; s < k_states; ++s) c += prob[s] * r[s][a] * r[s][b];
            return c;
        };
        auto corr4 = [&](int a, int b, int c2, int e) {
            double c = 0;
            for (int s = 0; s < k_states; ++s)
                c += prob[s] * r[s][a] * r[s][b] * r[s][c2] * r[s][e];
            return c;
        };
        CorrelationSet c(SourceTag::ClosedForm);
        c.set({"i", "j"}, corr2(0, 1));
        c.set({"j", "k"}, corr2(1, 2));
        c.set({"i", "l"}, corr2(0, 3));
        c.set({"k", "l"}, corr2(2, 3));
        c.set({"i", "i+", "j", "j+"}, corr4(0, 0, 1, 1));
        c.set({"j", "j+", "k", "k+"}, corr4(1, 1, 2, 2));
        c.set({"i", "i+", "l", "l+"}, corr4(0, 0, 3, 3));
        c.set({"k", "k+", "l", "l+"}, corr4(2, 2, 3, 3));
        c.set({"i", "j", "j+", "k"}, corr4(0, 1, 1, 2));
        c.set({"i", "k", "l", "l+"}, corr4(0, 2, 3, 3));
        c.set({"i", "i+", "j", "l"}, corr4(0, 0, 1, 3));
        c.set({"j", "k", "k+", "l"}, corr4(1, 2, 2, 3));
        const DResult d = compute_d(c);
        if (d.value < 1e-12) continue;
        const TestStatistics s = compute_v(c);
        CHECK(s.v <= 1.0 + 1e-12);
    }
}
