#include "mrsim/schedule.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace mrsim {

MeasurementSchedule::MeasurementSchedule(ScheduleMode mode, std::vector<Window> windows,
                                         double tau)
    : mode_(mode), windows_(std::move(windows)), tau_(tau) {
    if (windows_.empty()) throw std::domain_error("schedule: no windows");
    for (std::size_t m = 0; m < windows_.size(); ++m) {
        const auto& w = windows_[m];
        if (std::abs((w.contact_end - w.contact_start) - tau_) > 1e-12 * std::max(1.0, tau_))
            throw std::domain_error("schedule: window '" + w.label +
                                    "' duration differs from tau");
        if (m > 0 && w.contact_start < windows_[m - 1].contact_end - 1e-12)
            throw std::domain_error("schedule: windows '" + windows_[m - 1].label + "' and '" +
                                    w.label + "' overlap");
        for (std::size_t n = 0; n < m; ++n)
            if (windows_[n].label == w.label)
                throw std::domain_error("schedule: duplicate label '" + w.label + "'");
    }
}

namespace {

std::array<double, 4> main_times(const PhaseDelays& d, const ModelParams& p) {
    // first contact spans [0, tau]; outputs at t_i, t_j, t_k, t_l
    const double ti = p.tau;
    const double tj = ti + d.t_ji / p.omega;
    const double tk = tj + d.t_kj / p.omega;
    const double tl = tk + d.t_lk / p.omega;
    return {ti, tj, tk, tl};
}

}  // namespace

MeasurementSchedule MeasurementSchedule::four_point(const PhaseDelays& d, const ModelParams& p) {
    const auto t = main_times(d, p);
    const char* names[4] = {"i", "j", "k", "l"};
    std::vector<Window> w;
    for (int m = 0; m < 4; ++m) w.push_back({names[m], t[m] - p.tau, t[m]});
    return {ScheduleMode::FourPoint, std::move(w), p.tau};
}

MeasurementSchedule MeasurementSchedule::four_point_with_twins(
    const PhaseDelays& d, const ModelParams& p, const std::vector<std::string>& twins) {
    const auto t = main_times(d, p);
    const char* names[4] = {"i", "j", "k", "l"};
    std::vector<Window> w;
    for (int m = 0; m < 4; ++m) {
        w.push_back({names[m], t[m] - p.tau, t[m]});
        if (std::find(twins.begin(), twins.end(), names[m]) != twins.end())
            w.push_back({std::string(names[m]) + "+", t[m], t[m] + p.tau});
    }
    return {ScheduleMode::FourPoint, std::move(w), p.tau};
}

MeasurementSchedule MeasurementSchedule::eight_point(const PhaseDelays& d, const ModelParams& p) {
    const double min_delay = 2.0 * p.omega * p.tau;
    for (double td : {d.t_ji, d.t_kj, d.t_lk})
        if (td < min_delay - 1e-12)
            throw std::domain_error(
                "eight_point: phase delays must be >= 2 omega tau so twin windows fit");
    const auto t = main_times(d, p);
    const char* names[4] = {"i", "j", "k", "l"};
    std::vector<Window> w;
    for (int m = 0; m < 4; ++m) {
        w.push_back({names[m], t[m] - p.tau, t[m]});
        w.push_back({std::string(names[m]) + "+", t[m], t[m] + p.tau});
    }
    return {ScheduleMode::EightPoint, std::move(w), p.tau};
}

MeasurementSchedule MeasurementSchedule::sequential(std::size_t count, const ModelParams& p) {
    if (count < 2) throw std::domain_error("sequential: need at least 2 windows");
    std::vector<Window> w;
    for (std::size_t n = 1; n <= count; ++n)
        w.push_back({std::to_string(n), (double(n) - 1.0) * p.tau, double(n) * p.tau});
    return {ScheduleMode::Sequential, std::move(w), p.tau};
}

std::size_t MeasurementSchedule::index_of(const std::string& label) const {
    for (std::size_t m = 0; m < windows_.size(); ++m)
        if (windows_[m].label == label) return m;
    throw std::domain_error("schedule: unknown label '" + label + "'");
}

bool MeasurementSchedule::has_label(const std::string& label) const {
    return std::any_of(windows_.begin(), windows_.end(),
                       [&](const Window& w) { return w.label == label; });
}

std::vector<std::string> MeasurementSchedule::labels() const {
    std::vector<std::string> out;
    for (const auto& w : windows_) out.push_back(w.label);
    return out;
}

std::uint64_t MeasurementSchedule::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t k = 0; k < n; ++k) {
            h ^= b[k];
            h *= 1099511628211ull;
        }
    };
    const int mode = static_cast<int>(mode_);
    mix(&mode, sizeof mode);
    mix(&tau_, sizeof tau_);
    for (const auto& w : windows_) {
        mix(w.label.data(), w.label.size());
        mix(&w.contact_start, sizeof w.contact_start);
        mix(&w.contact_end, sizeof w.contact_end);
    }
    return h;
}

}  // namespace mrsim
