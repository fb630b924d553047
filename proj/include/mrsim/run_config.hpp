#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "mrsim/params.hpp"

namespace mrsim {

/// Bad flags / config files; mapped to the usage exit code by the CLI.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parse an angle given in radians ("1.5", "-0.7") or in multiples of pi
/// ("pi", "2/3pi", "0.4pi", "-pi"). Returns radians.
double parse_angle(const std::string& text);

enum class ModelKind { Quantum, Classical };
enum class EngineKind { ClosedForm, Exact, Mc };

/// Full description of one batch run. Flat key=value sections; every key can
/// also be overridden on the command line as section.key=value.
struct RunConfig {
    // [model]
    ModelKind model = ModelKind::Quantum;
    EngineKind engine = EngineKind::ClosedForm;
    double omega = 2.0 * 3.141592653589793;  // rad/us
    double a_perp_rel = 2.2;                 // A_perp / omega
    double tau_over_tp = 0.023;

    // [delays]
    PhaseDelays delays = PhaseDelays::max_violation();

    // [sweep] (tau sweep for curve, units of T_p, log-spaced)
    double sweep_min = 1e-3;
    double sweep_max = 1e-1;
    std::size_t sweep_points = 25;
    double fit_min = 0.018;  // scaling-fit window, units of T_p
    double fit_max = 0.056;

    // [scan]
    std::size_t scan_samples = 64;
    double scan_threshold = 1.0;

    // [wsl] grid = 0 evaluates the single configured delay triple
    std::size_t wsl_grid = 0;

    // [mc]
    std::size_t shots = 100000;
    std::uint64_t seed = 1;
    std::size_t resamples = 400;
    unsigned threads = 0;  // 0 = hardware default / MRSIM_THREADS
    bool photon = false;
    double n_plus = 0.15;
    double n_minus = 0.0;

    // [noise]
    double gamma = 100.0;       // 1/us
    double eta = 0.03;
    double t_total_hours = 10.0;

    // [output]
    std::string out_dir = "out";

    ModelParams params() const {
        // tau_over_tp in units of T_p = 2 pi / omega
        return {omega, a_perp_rel * omega, tau_over_tp * 2.0 * 3.141592653589793 / omega};
    }

    static RunConfig from_text(const std::string& text);
    static RunConfig from_file(const std::string& path);
    /// apply one "section.key=value" override
    void apply_override(const std::string& assignment);
    /// canonical serialization; from_text(to_text()) is the identity
    std::string to_text() const;

    void validate() const;
};

}  // namespace mrsim
