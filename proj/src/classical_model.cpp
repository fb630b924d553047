#include "mrsim/classical_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace mrsim {

ClassicalSpinState sample_uniform_spin(Substream& rng) {
    const double cos_theta = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return {std::acos(cos_theta), phi};
}

double phase_accumulated(const ClassicalSpinState& s, double t, const ModelParams& p) {
    if (t < p.tau - 1e-12) throw std::domain_error("phase_accumulated: t < tau");
    const double amp =
        (2.0 * p.a_perp / p.omega) * std::sin(s.theta) * std::sin(p.omega * p.tau / 2.0);
    return amp * std::cos(p.omega * t + s.phi - p.omega * p.tau / 2.0);
}

double classical_output(const ClassicalSpinState& s, double t, const ModelParams& p) {
    return std::sin(phase_accumulated(s, t, p));
}

double classical_wsl_corr2(double t_delta, const ModelParams& p) {
    return p.a_perp * p.a_perp * p.tau * p.tau / 3.0 * std::cos(t_delta);
}

double classical_wsl_corr4(const PhaseDelays& d, const ModelParams& p) {
    const double a4t4 = std::pow(p.a_perp * p.tau, 4);
    return a4t4 / 15.0 *
           (std::cos(d.t_ji) * std::cos(d.t_lk) + std::cos(d.t_ki()) * std::cos(d.t_lj()) +
            std::cos(d.t_li()) * std::cos(d.t_kj));
}

namespace {

// numerator / denominator-argument of the classical closed form
std::pair<double, double> classical_v_parts(const PhaseDelays& d) {
    const double num =
        std::sqrt(15.0) / 6.0 *
        std::abs(std::cos(d.t_ji) + std::cos(d.t_kj) + std::cos(d.t_li()) - std::cos(d.t_lk));
    const double a = std::cos(d.t_ji + d.t_kj) * std::cos(d.t_ji + d.t_lk) *
                     std::cos(d.t_kj + d.t_lk);
    const double b =
        (std::sin(d.t_ji) - std::sin(d.t_lk)) * (std::sin(d.t_kj) - std::sin(d.t_li()));
    return {num, std::abs(2.0 + a + b)};
}

constexpr double kDegenerateDen = 1e-12;

}  // namespace

double classical_v_limit(const PhaseDelays& d) {
    const auto [num, den2] = classical_v_parts(d);
    if (den2 <= kDegenerateDen)
        throw std::domain_error("classical_v_limit: degenerate denominator |2+a+b| ~ 0");
    return num / std::sqrt(den2);
}

ClassicalSignals classical_wsl_signals(const PhaseDelays& d, const ModelParams& p) {
    const double u = p.a_perp * p.a_perp * p.tau * p.tau;  // pair-correlation scale x3
    const double c1 = std::cos(d.t_ji), c2 = std::cos(d.t_kj), c3 = std::cos(d.t_lk);
    const double cli = std::cos(d.t_li());
    ClassicalSignals s;
    s.n = u / 3.0 * std::abs(c1 + c2 + cli - c3);
    const double q = u * u / 15.0;  // A_perp^4 tau^4 / 15
    s.a_term = q * (8.0 + std::cos(2 * d.t_ji) + std::cos(2 * d.t_kj) +
                    std::cos(2 * d.t_li()) + std::cos(2 * d.t_lk));
    s.b_term = 2.0 * q * (std::sin(d.t_ji) - std::sin(d.t_lk)) *
               (std::sin(d.t_kj) - std::sin(d.t_li()));
    s.d = std::sqrt(std::abs(s.a_term + 2.0 * s.b_term));
    s.v = s.d > 0.0 ? s.n / s.d : 0.0;
    return s;
}

ClassicalScanResult classical_scan_max(std::size_t samples_per_axis) {
    if (samples_per_axis < 2) throw std::domain_error("classical_scan_max: grid too coarse");
    const double two_pi = 2.0 * std::numbers::pi;
    double step = two_pi / double(samples_per_axis);
    ClassicalScanResult r;
    for (std::size_t a = 0; a < samples_per_axis; ++a)
        for (std::size_t b = 0; b < samples_per_axis; ++b)
            for (std::size_t c = 0; c < samples_per_axis; ++c) {
                const PhaseDelays d{double(a) * step, double(b) * step, double(c) * step};
                const auto [num, den2] = classical_v_parts(d);
                if (den2 <= kDegenerateDen) {
                    ++r.skipped_degenerate;
                    continue;
                }
                const double v = num / std::sqrt(den2);
                if (v > r.grid_max) {
                    r.grid_max = v;
                    r.argmax = d;
                }
            }
    r.refined_max = r.grid_max;
    PhaseDelays best = r.argmax;
    for (int it = 0; it < 80; ++it) {
        bool improved = false;
        for (int da = -1; da <= 1; ++da)
            for (int db = -1; db <= 1; ++db)
                for (int dc = -1; dc <= 1; ++dc) {
                    const PhaseDelays d{best.t_ji + da * step, best.t_kj + db * step,
                                        best.t_lk + dc * step};
                    const auto [num, den2] = classical_v_parts(d);
                    if (den2 <= kDegenerateDen) continue;
                    const double v = num / std::sqrt(den2);
                    if (v > r.refined_max) {
                        r.refined_max = v;
                        best = d;
                        improved = true;
                    }
                }
        if (!improved) step *= 0.5;
        if (step < 1e-12) break;
    }
    r.argmax = best;
    return r;
}

std::vector<double> simulate_classical(const MeasurementSchedule& sched, const ModelParams& p,
                                       std::size_t shots, std::uint64_t seed, unsigned threads) {
    if (shots < 2) throw std::domain_error("simulate_classical: need >= 2 shots");
    const std::size_t nw = sched.size();
    std::vector<double> out(shots * nw);
    std::vector<double> end_times(nw);
    for (std::size_t w = 0; w < nw; ++w) end_times[w] = sched.windows()[w].contact_end;

    auto run = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t s = lo; s < hi; ++s) {
            Substream rng(seed, rng_tag::kClassicalShot, s);
            const ClassicalSpinState spin = sample_uniform_spin(rng);
            for (std::size_t w = 0; w < nw; ++w)
                out[s * nw + w] = classical_output(spin, end_times[w], p);
        }
    };
    unsigned nt = threads ? threads : std::thread::hardware_concurrency();
    if (nt <= 1 || shots < 4096) {
        run(0, shots);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (shots + nt - 1) / nt;
        for (unsigned t = 0; t < nt; ++t) {
            const std::size_t lo = t * chunk, hi = std::min(shots, lo + chunk);
            if (lo < hi) pool.emplace_back(run, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace mrsim
