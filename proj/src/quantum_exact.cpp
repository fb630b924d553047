#include "mrsim/quantum_exact.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace mrsim {

std::pair<Mat2, Mat2> interaction_unitaries(const ModelParams& p) {
    const double th = p.theta();
    const double phi = p.phi();
    const Mat2 up = expm_su2({std::sin(th), 0.0, std::cos(th)}, phi);
    const Mat2 um = expm_su2({-std::sin(th), 0.0, std::cos(th)}, phi);
    return {up, um};
}

std::pair<Mat2, Mat2> kraus_operators(const ModelParams& p) {
    const auto [up, um] = interaction_unitaries(p);
    const Complex i(0.0, 1.0);
    return {0.5 * (up - i * um), 0.5 * (up + i * um)};
}

Mat2 superop_k(const Mat2& rho, const ModelParams& p) {
    const auto [up, um] = interaction_unitaries(p);
    const Mat2 x = um * rho * up.adjoint();
    return Complex(0.0, -0.5) * (x - x.adjoint());
}

Mat2 superop_m(const Mat2& rho, const ModelParams& p) {
    const auto [up, um] = interaction_unitaries(p);
    return 0.5 * (rho.conjugate_by(up) + rho.conjugate_by(um));
}

Mat2 free_evolution(const Mat2& rho, double t, const ModelParams& p) {
    // exp(-i omega t Iz) is diagonal; conjugation only rotates the coherences.
    const Complex ph = std::polar(1.0, -p.omega * t);
    Mat2 out = rho;
    out.e[1] *= ph;
    out.e[2] *= std::conj(ph);
    return out;
}

DensityMatrix free_evolution(const DensityMatrix& rho, double t, const ModelParams& p) {
    return DensityMatrix(free_evolution(rho.mat(), t, p));
}

double exact_correlation(const MeasurementSchedule& sched, const CorrelationRequest& req,
                         const ModelParams& p) {
    if (req.labels.empty()) throw std::domain_error("exact_correlation: empty request");
    std::vector<bool> selected(sched.size(), false);
    for (const auto& lab : req.labels) selected[sched.index_of(lab)] = true;

    Mat2 rho = 0.5 * Mat2::identity();
    double cursor = 0.0;
    for (std::size_t m = 0; m < sched.size(); ++m) {
        const Window& w = sched.windows()[m];
        rho = free_evolution(rho, w.contact_start - cursor, p);
        rho = selected[m] ? superop_k(rho, p) : superop_m(rho, p);
        cursor = w.contact_end;
    }
    return std::real(rho.trace());
}

double wsl_corr2(double t_delta, const ModelParams& p) {
    return p.a_perp * p.a_perp * p.tau * p.tau * std::cos(t_delta);
}

double wsl_v_limit_quantum(const PhaseDelays& d) {
    const double num = std::abs(std::cos(d.t_ji) + std::cos(d.t_kj) + std::cos(d.t_li()) -
                                std::cos(d.t_lk));
    const double den2 = std::abs(
        4.0 + 2.0 * (std::sin(d.t_ji) * std::sin(d.t_kj) - std::sin(d.t_kj) * std::sin(d.t_lk)));
    if (den2 <= 1e-12)
        throw std::domain_error("wsl_v_limit_quantum: degenerate denominator D ~ 0");
    return num / std::sqrt(den2);
}

double wsl_margin_quantum(const PhaseDelays& d) {
    const double num = std::abs(std::cos(d.t_ji) + std::cos(d.t_kj) + std::cos(d.t_li()) -
                                std::cos(d.t_lk));
    const double den2 = std::abs(
        4.0 + 2.0 * (std::sin(d.t_ji) * std::sin(d.t_kj) - std::sin(d.t_kj) * std::sin(d.t_lk)));
    return num - std::sqrt(den2);
}

const std::vector<std::vector<std::string>>& nd_pair_tuples() {
    static const std::vector<std::vector<std::string>> t = {
        {"i", "j"}, {"j", "k"}, {"i", "l"}, {"k", "l"}};
    return t;
}

const std::vector<std::vector<std::string>>& nd_quad_tuples() {
    static const std::vector<std::vector<std::string>> t = {
        {"i", "i+", "j", "j+"}, {"j", "j+", "k", "k+"}, {"i", "i+", "l", "l+"},
        {"k", "k+", "l", "l+"}, {"i", "j", "j+", "k"},  {"i", "k", "l", "l+"},
        {"i", "i+", "j", "l"},  {"j", "k", "k+", "l"}};
    return t;
}

namespace {

double tuple_correlation(const std::vector<std::string>& labels, const PhaseDelays& d,
                         const ModelParams& p, ExactConvention conv) {
    if (conv == ExactConvention::EightPoint) {
        const auto sched = MeasurementSchedule::eight_point(d, p);
        return exact_correlation(sched, {labels}, p);
    }
    std::vector<std::string> twins;
    for (const auto& lab : labels)
        if (lab.size() == 2) twins.push_back(lab.substr(0, 1));
    const auto sched = MeasurementSchedule::four_point_with_twins(d, p, twins);
    return exact_correlation(sched, {labels}, p);
}

}  // namespace

ExactSignals exact_signals(const PhaseDelays& d, const ModelParams& p, ExactConvention conv) {
    ExactSignals s;
    for (int m = 0; m < 4; ++m)
        s.pairs[m] = tuple_correlation(nd_pair_tuples()[m], d, p, conv);
    s.n = std::abs(s.pairs[0] + s.pairs[1] + s.pairs[2] - s.pairs[3]);
    std::array<double, 8> q{};
    for (int m = 0; m < 8; ++m) q[m] = tuple_correlation(nd_quad_tuples()[m], d, p, conv);
    s.a_term = q[0] + q[1] + q[2] + q[3];
    s.b_term = q[4] - q[5] + q[6] - q[7];
    s.d = std::sqrt(std::abs(s.a_term + 2.0 * s.b_term));
    s.v = s.d > 0.0 ? s.n / s.d : 0.0;
    return s;
}

std::vector<GridPoint> scan_violation_region(std::size_t samples_per_axis, double threshold) {
    if (samples_per_axis < 2) throw std::domain_error("scan: need >= 2 samples per axis");
    const double step = 2.0 * std::numbers::pi / double(samples_per_axis);
    std::vector<GridPoint> out;
    for (std::size_t a = 0; a < samples_per_axis; ++a)
        for (std::size_t b = 0; b < samples_per_axis; ++b)
            for (std::size_t c = 0; c < samples_per_axis; ++c) {
                const PhaseDelays d{double(a) * step, double(b) * step, double(c) * step};
                double v;
                try {
                    v = wsl_v_limit_quantum(d);
                } catch (const std::domain_error&) {
                    continue;  // 0/0 point of the closed form
                }
                if (v > threshold) out.push_back({d, v});
            }
    return out;
}

std::pair<PhaseDelays, double> max_violation_margin(std::size_t samples_per_axis) {
    if (samples_per_axis < 64) throw std::domain_error("max_violation_margin: grid too coarse");
    const double two_pi = 2.0 * std::numbers::pi;
    double step = two_pi / double(samples_per_axis);
    PhaseDelays best{0.0, 0.0, 0.0};
    double best_val = -1e300;
    for (std::size_t a = 0; a < samples_per_axis; ++a)
        for (std::size_t b = 0; b < samples_per_axis; ++b)
            for (std::size_t c = 0; c < samples_per_axis; ++c) {
                const PhaseDelays d{double(a) * step, double(b) * step, double(c) * step};
                const double m = wsl_margin_quantum(d);
                if (m > best_val) {
                    best_val = m;
                    best = d;
                }
            }
    // local refinement: shrink a 3^3 stencil around the best point
    for (int it = 0; it < 60; ++it) {
        step *= 0.6;
        for (int da = -1; da <= 1; ++da)
            for (int db = -1; db <= 1; ++db)
                for (int dc = -1; dc <= 1; ++dc) {
                    const PhaseDelays d{best.t_ji + da * step, best.t_kj + db * step,
                                        best.t_lk + dc * step};
                    const double m = wsl_margin_quantum(d);
                    if (m > best_val) {
                        best_val = m;
                        best = d;
                    }
                }
    }
    return {best, best_val};
}

}  // namespace mrsim
