#include "mrsim/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mrsim/quantum_exact.hpp"

namespace mrsim {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Violation: return "violation";
        case Verdict::NoViolation: return "no_violation";
        default: return "inconclusive";
    }
}

void CorrelationSet::set(const std::vector<std::string>& labels, double value,
                         double std_error) {
    if (labels.empty()) throw std::domain_error("CorrelationSet: empty tuple");
    if (std_error < 0.0) throw std::domain_error("CorrelationSet: negative error");
    entries_[labels] = Entry{value, std_error, std::nullopt};
}

void CorrelationSet::set_replicates(const std::vector<std::string>& labels,
                                    std::vector<double> reps) {
    auto it = entries_.find(labels);
    if (it == entries_.end())
        throw std::domain_error("CorrelationSet: replicates for unknown tuple");
    it->second.reps = std::move(reps);
}

bool CorrelationSet::has(const std::vector<std::string>& labels) const {
    return entries_.count(labels) != 0;
}

const CorrelationSet::Entry& CorrelationSet::at(const std::vector<std::string>& labels) const {
    auto it = entries_.find(labels);
    if (it == entries_.end()) {
        std::string key;
        for (const auto& l : labels) key += l + ",";
        throw std::domain_error("CorrelationSet: missing tuple (" + key + ")");
    }
    return it->second;
}

double CorrelationSet::value(const std::vector<std::string>& labels) const {
    return at(labels).value;
}
double CorrelationSet::std_error(const std::vector<std::string>& labels) const {
    return at(labels).std_error;
}
const std::vector<double>* CorrelationSet::replicates(
    const std::vector<std::string>& labels) const {
    const Entry& e = at(labels);
    return e.reps ? &*e.reps : nullptr;
}

CorrelationSet CorrelationSet::from_estimation(const EstimationResult& res, SourceTag tag) {
    CorrelationSet c(tag);
    for (std::size_t t = 0; t < res.estimates.size(); ++t) {
        const auto& est = res.estimates[t];
        c.set(est.labels, est.value, est.std_error);
        if (t < res.replicates.size() && res.replicates[t].size() >= 2)
            c.set_replicates(est.labels, res.replicates[t]);
    }
    return c;
}

ValueError compute_n(const CorrelationSet& c) {
    const auto& pairs = nd_pair_tuples();
    const double signed_n = c.value(pairs[0]) + c.value(pairs[1]) + c.value(pairs[2]) -
                            c.value(pairs[3]);
    double var = 0.0;
    for (const auto& t : pairs) var += c.std_error(t) * c.std_error(t);
    return {std::abs(signed_n), std::sqrt(var)};
}

DResult compute_d(const CorrelationSet& c) {
    const auto& quads = nd_quad_tuples();
    DResult r;
    r.a_term = c.value(quads[0]) + c.value(quads[1]) + c.value(quads[2]) + c.value(quads[3]);
    r.b_term = c.value(quads[4]) - c.value(quads[5]) + c.value(quads[6]) - c.value(quads[7]);
    const double ab = r.a_term + 2.0 * r.b_term;
    r.ab_negative = ab < 0.0;
    r.value = std::sqrt(std::abs(ab));
    double var_ab = 0.0;
    for (int m = 0; m < 4; ++m) {
        const double e = c.std_error(quads[m]);
        var_ab += e * e;  // unit weight in A
    }
    for (int m = 4; m < 8; ++m) {
        const double e = c.std_error(quads[m]);
        var_ab += 4.0 * e * e;  // weight 2 in 2B
    }
    const double d_ab = std::sqrt(var_ab);
    if (r.value > 0.0) r.std_error = d_ab / (2.0 * r.value);
    // first-order propagation through sqrt breaks down near D ~ 0
    r.error_unreliable = r.value < 10.0 * d_ab;
    return r;
}

namespace {

double bootstrap_dv(const CorrelationSet& c) {
    // joint replicates: recompute V per resample, spread across resamples
    const auto& pairs = nd_pair_tuples();
    const auto& quads = nd_quad_tuples();
    const std::vector<double>* rp[4];
    const std::vector<double>* rq[8];
    std::size_t nrep = 0;
    for (int m = 0; m < 4; ++m) {
        rp[m] = c.replicates(pairs[m]);
        if (!rp[m]) return -1.0;
        nrep = rp[m]->size();
    }
    for (int m = 0; m < 8; ++m) {
        rq[m] = c.replicates(quads[m]);
        if (!rq[m] || rq[m]->size() != nrep) return -1.0;
    }
    std::vector<double> vs;
    vs.reserve(nrep);
    for (std::size_t r = 0; r < nrep; ++r) {
        const double n =
            std::abs((*rp[0])[r] + (*rp[1])[r] + (*rp[2])[r] - (*rp[3])[r]);
        const double a = (*rq[0])[r] + (*rq[1])[r] + (*rq[2])[r] + (*rq[3])[r];
        const double b = (*rq[4])[r] - (*rq[5])[r] + (*rq[6])[r] - (*rq[7])[r];
        const double d = std::sqrt(std::abs(a + 2.0 * b));
        if (d > 0.0) vs.push_back(n / d);
    }
    if (vs.size() < 2) return -1.0;
    double mean = 0.0;
    for (double v : vs) mean += v;
    mean /= double(vs.size());
    double var = 0.0;
    for (double v : vs) var += (v - mean) * (v - mean);
    return std::sqrt(var / double(vs.size() - 1));
}

}  // namespace

TestStatistics compute_v(const CorrelationSet& c) {
    TestStatistics s;
    const ValueError n = compute_n(c);
    const DResult d = compute_d(c);
    s.n = n.value;
    s.dn = n.std_error;
    s.d = d.value;
    s.dd = d.std_error;
    s.a_term = d.a_term;
    s.b_term = d.b_term;
    s.d_error_unreliable = d.error_unreliable;
    s.ab_negative = d.ab_negative;
    if (!(s.d > 0.0)) throw std::domain_error("compute_v: degenerate D = 0");
    s.v = s.n / s.d;
    const double dv_boot = bootstrap_dv(c);
    if (dv_boot >= 0.0) {
        s.dv = dv_boot;
    } else {
        const double t1 = s.dn / s.d;
        const double t2 = s.n * s.dd / (s.d * s.d);
        s.dv = std::sqrt(t1 * t1 + t2 * t2);
    }
    return s;
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points) {
    std::vector<std::pair<double, double>> lnpts;
    for (const auto& [tau, sig] : points) {
        if (!(tau > 0.0)) throw std::domain_error("fit_scaling: non-positive tau");
        if (sig > 0.0) lnpts.emplace_back(std::log(tau), std::log(sig));
    }
    if (lnpts.size() < 3)
        throw std::domain_error("fit_scaling: fewer than 3 usable points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : lnpts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = double(lnpts.size());
    const double den = n * sxx - sx * sx;
    if (std::abs(den) < 1e-300) throw std::domain_error("fit_scaling: degenerate abscissae");
    ScalingFit f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    f.used_points = lnpts.size();
    for (const auto& [x, y] : lnpts)
        f.residual = std::max(f.residual, std::abs(y - (f.slope * x + f.intercept)));
    return f;
}

Verdict verdict(const TestStatistics& stats, double slope_tol, double k_sigma) {
    if (!stats.slopes_set) return Verdict::Inconclusive;
    const bool scaling_ok = std::abs(stats.slope_n - 2.0) <= slope_tol &&
                            std::abs(stats.slope_d - 2.0) <= slope_tol;
    if (!scaling_ok) return Verdict::Inconclusive;
    if (stats.v - k_sigma * stats.dv > 1.0) return Verdict::Violation;
    if (stats.v + k_sigma * stats.dv <= 1.0) return Verdict::NoViolation;
    return Verdict::Inconclusive;
}

NoiseBudget::NoiseBudget(double gamma_, double eta_, double t_total_, double r_target_)
    : gamma(gamma_), eta(eta_), t_total(t_total_), r_target(r_target_) {
    if (!(gamma > 0.0) || !(eta > 0.0) || !(t_total > 0.0) || !(r_target >= 0.0))
        throw std::domain_error("NoiseBudget: non-positive field");
    if (eta > 1.0) throw std::domain_error("NoiseBudget: eta > 1");
}

NoisePrediction noise_sigma_v(const NoiseBudget& budget, const ModelParams& p,
                              const TestStatistics& stats) {
    const double chi_tau = budget.chi_ph() * p.tau;
    const double root_m_inv = std::sqrt(p.tau / budget.t_total);  // 1/sqrt(M), M = T/tau
    NoisePrediction out;
    out.shots = budget.t_total / p.tau;
    out.dc2 = (1.0 + 2.0 / chi_tau) * root_m_inv;
    out.dc4 = (1.0 + 2.0 / chi_tau) * (1.0 + 2.0 / chi_tau) * root_m_inv;
    out.dn = 2.0 * out.dc2;  // quadrature over 4 equal pair errors
    const double d = stats.d, v = stats.v;
    if (!(d > 0.0)) throw std::domain_error("noise_sigma_v: D must be positive");
    // quadrature d(A+2B): 4 unit-weight + 4 double-weight quadruples
    const double d_ab = std::sqrt(20.0) * out.dc4;
    out.dd = d_ab / (2.0 * d);
    const double n_sig = v * d;
    out.dv_propagated = std::sqrt(std::pow(out.dn / d, 2) +
                                  std::pow(n_sig * out.dd / (d * d), 2));
    const double pref = root_m_inv / chi_tau;
    const double term1 = 16.0 / (d * d);
    const double term2 = 48.0 * std::pow(v / (d * d * chi_tau), 2);
    out.dv_full = pref * std::sqrt(term1 + term2);
    const double a2t2 = p.a_perp * p.a_perp * p.tau * p.tau;
    out.dv_dominant = 2.0 * root_m_inv / (chi_tau * chi_tau) / (a2t2 * a2t2);
    return out;
}

double required_acquisition_time(const NoiseBudget& budget, const ModelParams& p, double r) {
    if (!(r >= 0.0)) throw std::domain_error("required_acquisition_time: negative R");
    const double chi_tau = budget.chi_ph() * p.tau;
    const double at = p.a_perp * p.tau;
    const double form1 = 64.0 * r * r * p.tau / std::pow(chi_tau, 4) / std::pow(at, 8);
    const double form2 = 64.0 / budget.gamma / std::pow(budget.eta, 4) *
                         std::pow(p.a_perp / budget.gamma, 3) * r * r / std::pow(at, 11);
    if (form1 > 0.0 && std::abs(form1 - form2) > 1e-10 * form1)
        throw std::logic_error("required_acquisition_time: algebraic forms disagree");
    return form1;
}

std::string TestStatistics::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{"
       << "\"n\":" << n << ",\"d\":" << d << ",\"v\":" << v << ",\"a_term\":" << a_term
       << ",\"b_term\":" << b_term << ",\"dn\":" << dn << ",\"dd\":" << dd << ",\"dv\":" << dv
       << ",\"slope_n\":" << slope_n << ",\"slope_d\":" << slope_d
       << ",\"d_error_unreliable\":" << (d_error_unreliable ? "true" : "false")
       << ",\"ab_negative\":" << (ab_negative ? "true" : "false")
       << ",\"verdict\":\"" << to_string(verdict) << "\"}";
    return os.str();
}

}  // namespace mrsim
