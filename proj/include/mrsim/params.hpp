#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mrsim {

/// Physical parameters of the spin model. Units: angular frequencies in
/// rad/us, times in us (documented convention, no unit objects).
struct ModelParams {
    double omega;   // Larmor angular frequency, rad/us
    double a_perp;  // target-sensor coupling, rad/us
    double tau;     // contact duration, us

    ModelParams(double omega_, double a_perp_, double tau_)
        : omega(omega_), a_perp(a_perp_), tau(tau_) {
        if (!(omega > 0.0)) throw std::domain_error("ModelParams: omega must be > 0");
        if (!(a_perp > 0.0)) throw std::domain_error("ModelParams: a_perp must be > 0");
        if (!(tau >= 0.0) || !std::isfinite(tau))
            throw std::domain_error("ModelParams: tau must be >= 0");
    }

    /// rotation angle per contact
    double phi() const { return std::sqrt(a_perp * a_perp + omega * omega) * tau; }
    /// tilt of the conditional rotation axes, theta in [0, pi/2)
    double theta() const { return std::atan2(a_perp, omega); }
    /// precession period T_p = 2 pi / omega
    double period() const { return 2.0 * std::numbers::pi / omega; }

    ModelParams with_tau(double t) const { return {omega, a_perp, t}; }

    /// Default demo preset: omega = 2 pi / us (T_p = 1 us), A_perp = 2.2 omega.
    static ModelParams main_text_preset(double tau_over_tp) {
        const double w = 2.0 * std::numbers::pi;
        return {w, 2.2 * w, tau_over_tp};
    }
    /// Noise-budget preset: A_perp = 2 pi x 2.3 / us.
    static ModelParams snr_preset(double tau_over_tp) {
        const double w = 2.0 * std::numbers::pi;
        return {w, 2.3 * w, tau_over_tp};
    }
};

/// Larmor phases accumulated between the four measurement windows.
struct PhaseDelays {
    double t_ji;
    double t_kj;
    double t_lk;

    double t_ki() const { return t_ji + t_kj; }
    double t_lj() const { return t_kj + t_lk; }
    double t_li() const { return t_ji + t_kj + t_lk; }

    static PhaseDelays max_violation() {
        using std::numbers::pi;
        return {2.0 * pi / 3.0, pi, 5.0 * pi / 3.0};
    }
    /// a deliberately detuned triple, still violating in the WSL
    static PhaseDelays off_optimal() {
        using std::numbers::pi;
        return {1.2 * pi, 0.4 * pi, 5.0 * pi / 3.0};
    }
};

}  // namespace mrsim
