#include "mrsim/run_config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mrsim {

double parse_angle(const std::string& text) {
    std::string s = text;
    // trim
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    if (b == std::string::npos) throw UsageError("empty angle");
    s = s.substr(b, e - b + 1);

    double pi_factor = 1.0;
    if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
        pi_factor = std::numbers::pi;
        s = s.substr(0, s.size() - 2);
        if (s.empty() || s == "-" || s == "+") s += "1";
    }
    double value;
    const auto slash = s.find('/');
    try {
        std::size_t used = 0;
        if (slash != std::string::npos) {
            std::size_t used2 = 0;
            const double num = std::stod(s.substr(0, slash), &used);
            const double den = std::stod(s.substr(slash + 1), &used2);
            if (used != slash || used2 != s.size() - slash - 1)
                throw UsageError("bad angle '" + text + "'");
            if (den == 0.0) throw UsageError("zero denominator in angle '" + text + "'");
            value = num / den;
        } else {
            value = std::stod(s, &used);
            if (used != s.size()) throw UsageError("bad angle '" + text + "'");
        }
    } catch (const std::invalid_argument&) {
        throw UsageError("bad angle '" + text + "'");
    } catch (const std::out_of_range&) {
        throw UsageError("angle out of range '" + text + "'");
    }
    return value * pi_factor;
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw UsageError("bad number for " + key + ": '" + v + "'");
        return x;
    } catch (const std::invalid_argument&) {
        throw UsageError("bad number for " + key + ": '" + v + "'");
    } catch (const std::out_of_range&) {
        throw UsageError("number out of range for " + key + ": '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    if (!v.empty() && (v[0] == '-' || v[0] == '+'))
        throw UsageError("bad integer for " + key + ": '" + v + "'");
    try {
        std::size_t used = 0;
        const unsigned long long x = std::stoull(v, &used);
        if (used != v.size()) throw UsageError("bad integer for " + key + ": '" + v + "'");
        return x;
    } catch (const std::invalid_argument&) {
        throw UsageError("bad integer for " + key + ": '" + v + "'");
    } catch (const std::out_of_range&) {
        throw UsageError("integer out of range for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw UsageError("bad boolean for " + key + ": '" + v + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

void apply_kv(RunConfig& c, const std::string& full_key, const std::string& value) {
    const std::string& k = full_key;
    const std::string& v = value;
    if (k == "model.kind") {
        if (v == "quantum")
            c.model = ModelKind::Quantum;
        else if (v == "classical")
            c.model = ModelKind::Classical;
        else
            throw UsageError("model.kind must be quantum|classical, got '" + v + "'");
    } else if (k == "model.engine") {
        if (v == "closed_form")
            c.engine = EngineKind::ClosedForm;
        else if (v == "exact")
            c.engine = EngineKind::Exact;
        else if (v == "mc")
            c.engine = EngineKind::Mc;
        else
            throw UsageError("model.engine must be closed_form|exact|mc, got '" + v + "'");
    } else if (k == "model.omega") {
        c.omega = parse_angle(v);
    } else if (k == "model.a_perp_rel") {
        c.a_perp_rel = parse_double(k, v);
    } else if (k == "model.tau_over_tp") {
        c.tau_over_tp = parse_double(k, v);
    } else if (k == "delays.t_ji") {
        c.delays.t_ji = parse_angle(v);
    } else if (k == "delays.t_kj") {
        c.delays.t_kj = parse_angle(v);
    } else if (k == "delays.t_lk") {
        c.delays.t_lk = parse_angle(v);
    } else if (k == "sweep.tau_min") {
        c.sweep_min = parse_double(k, v);
    } else if (k == "sweep.tau_max") {
        c.sweep_max = parse_double(k, v);
    } else if (k == "sweep.points") {
        c.sweep_points = std::size_t(parse_u64(k, v));
    } else if (k == "sweep.fit_min") {
        c.fit_min = parse_double(k, v);
    } else if (k == "sweep.fit_max") {
        c.fit_max = parse_double(k, v);
    } else if (k == "scan.samples_per_axis") {
        c.scan_samples = std::size_t(parse_u64(k, v));
    } else if (k == "scan.threshold") {
        c.scan_threshold = parse_double(k, v);
    } else if (k == "wsl.grid") {
        c.wsl_grid = std::size_t(parse_u64(k, v));
    } else if (k == "mc.shots") {
        c.shots = std::size_t(parse_u64(k, v));
    } else if (k == "mc.seed") {
        c.seed = parse_u64(k, v);
    } else if (k == "mc.resamples") {
        c.resamples = std::size_t(parse_u64(k, v));
    } else if (k == "mc.threads") {
        c.threads = unsigned(parse_u64(k, v));
    } else if (k == "mc.photon") {
        c.photon = parse_bool(k, v);
    } else if (k == "mc.n_plus") {
        c.n_plus = parse_double(k, v);
    } else if (k == "mc.n_minus") {
        c.n_minus = parse_double(k, v);
    } else if (k == "noise.gamma") {
        c.gamma = parse_double(k, v);
    } else if (k == "noise.eta") {
        c.eta = parse_double(k, v);
    } else if (k == "noise.t_total_hours") {
        c.t_total_hours = parse_double(k, v);
    } else if (k == "output.dir") {
        c.out_dir = v;
    } else {
        throw UsageError("unknown config key '" + k + "'");
    }
}

}  // namespace

RunConfig RunConfig::from_text(const std::string& text) {
    RunConfig c;
    std::istringstream is(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw UsageError("line " + std::to_string(lineno) + ": unterminated section");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (section.empty())
            throw UsageError("line " + std::to_string(lineno) + ": key '" + key +
                             "' outside any [section]");
        try {
            apply_kv(c, section + "." + key, value);
        } catch (const UsageError& e) {
            throw UsageError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw UsageError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return from_text(buf.str());
}

void RunConfig::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw UsageError("override must be section.key=value: '" + assignment + "'");
    apply_kv(*this, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
    validate();
}

std::string RunConfig::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "[model]\n";
    os << "kind = " << (model == ModelKind::Quantum ? "quantum" : "classical") << "\n";
    os << "engine = "
       << (engine == EngineKind::ClosedForm ? "closed_form"
                                            : engine == EngineKind::Exact ? "exact" : "mc")
       << "\n";
    os << "omega = " << omega << "\n";
    os << "a_perp_rel = " << a_perp_rel << "\n";
    os << "tau_over_tp = " << tau_over_tp << "\n";
    os << "[delays]\n";
    os << "t_ji = " << delays.t_ji << "\n";
    os << "t_kj = " << delays.t_kj << "\n";
    os << "t_lk = " << delays.t_lk << "\n";
    os << "[sweep]\n";
    os << "tau_min = " << sweep_min << "\n";
    os << "tau_max = " << sweep_max << "\n";
    os << "points = " << sweep_points << "\n";
    os << "fit_min = " << fit_min << "\n";
    os << "fit_max = " << fit_max << "\n";
    os << "[scan]\n";
    os << "samples_per_axis = " << scan_samples << "\n";
    os << "threshold = " << scan_threshold << "\n";
    os << "[wsl]\n";
    os << "grid = " << wsl_grid << "\n";
    os << "[mc]\n";
    os << "shots = " << shots << "\n";
    os << "seed = " << seed << "\n";
    os << "resamples = " << resamples << "\n";
    os << "threads = " << threads << "\n";
    os << "photon = " << (photon ? "true" : "false") << "\n";
    os << "n_plus = " << n_plus << "\n";
    os << "n_minus = " << n_minus << "\n";
    os << "[noise]\n";
    os << "gamma = " << gamma << "\n";
    os << "eta = " << eta << "\n";
    os << "t_total_hours = " << t_total_hours << "\n";
    os << "[output]\n";
    os << "dir = " << out_dir << "\n";
    return os.str();
}

void RunConfig::validate() const {
    if (!(omega > 0.0)) throw UsageError("model.omega must be > 0");
    if (!(a_perp_rel > 0.0)) throw UsageError("model.a_perp_rel must be > 0");
    if (!(tau_over_tp > 0.0)) throw UsageError("model.tau_over_tp must be > 0");
    if (!(sweep_min > 0.0) || !(sweep_max > sweep_min))
        throw UsageError("sweep.tau_min/tau_max must satisfy 0 < min < max");
    if (sweep_points < 3) throw UsageError("sweep.points must be >= 3");
    if (engine == EngineKind::Mc && shots < 2) throw UsageError("mc.shots must be >= 2");
    if (resamples < 2) throw UsageError("mc.resamples must be >= 2");
    if (n_plus < 0.0 || n_minus < 0.0) throw UsageError("mc.n_plus/n_minus must be >= 0");
    if (photon && n_plus == n_minus)
        throw UsageError("mc photon mode needs n_plus != n_minus");
    if (!(gamma > 0.0) || !(eta > 0.0) || eta > 1.0 || !(t_total_hours > 0.0))
        throw UsageError("noise.gamma/eta/t_total_hours out of range");
    if (scan_samples < 2) throw UsageError("scan.samples_per_axis must be >= 2");
}

}  // namespace mrsim
