#include "mrsim/trajectory_mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "mrsim/classical_model.hpp"
#include "mrsim/quantum_exact.hpp"

namespace mrsim {

namespace {

unsigned resolve_threads(unsigned threads, std::size_t shots) {
    if (threads) return threads;
    const unsigned hc = std::thread::hardware_concurrency();
    if (hc <= 1 || shots < 4096) return 1;
    return hc;
}

void parallel_shots(std::size_t shots, unsigned threads,
                    const std::function<void(std::size_t, std::size_t)>& run) {
    if (threads <= 1) {
        run(0, shots);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (shots + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk, hi = std::min(shots, lo + chunk);
        if (lo < hi) pool.emplace_back(run, lo, hi);
    }
    for (auto& th : pool) th.join();
}

}  // namespace

ShotDataset::ShotDataset(DatasetKind kind, std::size_t shots, std::vector<std::string> labels,
                         std::uint64_t seed, std::uint64_t schedule_hash)
    : kind_(kind),
      shots_(shots),
      labels_(std::move(labels)),
      seed_(seed),
      schedule_hash_(schedule_hash) {
    if (shots_ == 0) throw std::domain_error("ShotDataset: zero shots");
    if (labels_.empty()) throw std::domain_error("ShotDataset: no windows");
    if (kind_ == DatasetKind::Analog)
        dvals_.assign(shots_ * labels_.size(), 0.0);
    else
        ivals_.assign(shots_ * labels_.size(), 0);
}

std::size_t ShotDataset::index_of(const std::string& label) const {
    for (std::size_t w = 0; w < labels_.size(); ++w)
        if (labels_[w] == label) return w;
    throw std::domain_error("ShotDataset: unknown label '" + label + "'");
}

ShotDataset ShotDataset::prefix(std::size_t shots) const {
    if (shots == 0 || shots > shots_) throw std::domain_error("ShotDataset::prefix: bad count");
    ShotDataset out(kind_, shots, labels_, seed_, schedule_hash_);
    const std::size_t n = shots * windows();
    if (kind_ == DatasetKind::Analog)
        std::copy_n(dvals_.begin(), n, out.dvals_.begin());
    else
        std::copy_n(ivals_.begin(), n, out.ivals_.begin());
    return out;
}

namespace {

constexpr char kMagic[8] = {'M', 'R', 'S', 'H', 'O', 'T', '0', '1'};

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
void get(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

void ShotDataset::save_binary(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_binary: cannot open " + path);
    os.write(kMagic, sizeof(kMagic));
    put(os, std::uint8_t(kind_));
    put(os, std::uint64_t(shots_));
    put(os, std::uint64_t(labels_.size()));
    put(os, seed_);
    put(os, schedule_hash_);
    for (const auto& lab : labels_) {
        put(os, std::uint32_t(lab.size()));
        os.write(lab.data(), std::streamsize(lab.size()));
    }
    if (kind_ == DatasetKind::Analog)
        os.write(reinterpret_cast<const char*>(dvals_.data()),
                 std::streamsize(dvals_.size() * sizeof(double)));
    else
        os.write(reinterpret_cast<const char*>(ivals_.data()),
                 std::streamsize(ivals_.size() * sizeof(std::int16_t)));
    if (!os) throw std::runtime_error("save_binary: write failed for " + path);
}

ShotDataset ShotDataset::load_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_binary: cannot open " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("load_binary: bad header in " + path);
    std::uint8_t kind_raw;
    std::uint64_t shots, nwin, seed, shash;
    get(is, kind_raw);
    get(is, shots);
    get(is, nwin);
    get(is, seed);
    get(is, shash);
    if (kind_raw > 2) throw std::runtime_error("load_binary: bad dataset kind");
    std::vector<std::string> labels(nwin);
    for (auto& lab : labels) {
        std::uint32_t len;
        get(is, len);
        lab.resize(len);
        is.read(lab.data(), std::streamsize(len));
    }
    ShotDataset out(DatasetKind(kind_raw), std::size_t(shots), std::move(labels), seed, shash);
    if (out.kind_ == DatasetKind::Analog)
        is.read(reinterpret_cast<char*>(out.dvals_.data()),
                std::streamsize(out.dvals_.size() * sizeof(double)));
    else
        is.read(reinterpret_cast<char*>(out.ivals_.data()),
                std::streamsize(out.ivals_.size() * sizeof(std::int16_t)));
    if (!is) throw std::runtime_error("load_binary: truncated payload in " + path);
    return out;
}

void ShotDataset::write_csv(std::ostream& os) const {
    os << "shot";
    for (const auto& lab : labels_) os << ',' << lab;
    os << '\n';
    os.precision(17);
    for (std::size_t s = 0; s < shots_; ++s) {
        os << s;
        for (std::size_t w = 0; w < windows(); ++w) os << ',' << value(s, w);
        os << '\n';
    }
}

ShotDataset simulate_quantum(const MeasurementSchedule& sched, const ModelParams& p,
                             std::size_t shots, std::uint64_t seed, unsigned threads) {
    const std::size_t nw = sched.size();
    ShotDataset out(DatasetKind::Spin, shots, sched.labels(), seed, sched.hash());

    // Precombine each window's Kraus operators with the preceding free
    // evolution: one 2x2 product per branch per window, fixed per run.
    const auto [mp, mm] = kraus_operators(p);
    std::vector<Mat2> branch_plus(nw), branch_minus(nw);
    double cursor = 0.0;
    for (std::size_t w = 0; w < nw; ++w) {
        const double gap = sched.windows()[w].contact_start - cursor;
        const Complex ph = std::polar(1.0, -0.5 * p.omega * gap);
        Mat2 u_gap = Mat2::identity();
        u_gap.e[0] = ph;
        u_gap.e[3] = std::conj(ph);
        branch_plus[w] = mp * u_gap;
        branch_minus[w] = mm * u_gap;
        cursor = sched.windows()[w].contact_end;
    }

    auto run = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t s = lo; s < hi; ++s) {
            Substream rng(seed, rng_tag::kQuantumShot, s);
            // purification of the maximally mixed state: uniform pure spinor
            const double ct = rng.uniform(-1.0, 1.0);
            const double half = 0.5 * std::acos(ct);
            const double az = rng.uniform(0.0, 2.0 * std::numbers::pi);
            Complex psi0 = std::cos(half);
            Complex psi1 = std::polar(std::sin(half), az);
            for (std::size_t w = 0; w < nw; ++w) {
                const Mat2& bp = branch_plus[w];
                const Complex a0 = bp.e[0] * psi0 + bp.e[1] * psi1;
                const Complex a1 = bp.e[2] * psi0 + bp.e[3] * psi1;
                const double p_plus = std::norm(a0) + std::norm(a1);
                if (rng.uniform() < p_plus) {
                    const double inv = 1.0 / std::sqrt(p_plus);
                    psi0 = a0 * inv;
                    psi1 = a1 * inv;
                    out.ival(s, w) = 1;
                } else {
                    const Mat2& bm = branch_minus[w];
                    const Complex b0 = bm.e[0] * psi0 + bm.e[1] * psi1;
                    const Complex b1 = bm.e[2] * psi0 + bm.e[3] * psi1;
                    const double inv = 1.0 / std::sqrt(std::norm(b0) + std::norm(b1));
                    psi0 = b0 * inv;
                    psi1 = b1 * inv;
                    out.ival(s, w) = -1;
                }
            }
        }
    };
    parallel_shots(shots, resolve_threads(threads, shots), run);
    return out;
}

ShotDataset simulate_classical_dataset(const MeasurementSchedule& sched, const ModelParams& p,
                                       std::size_t shots, std::uint64_t seed, unsigned threads) {
    ShotDataset out(DatasetKind::Analog, shots, sched.labels(), seed, sched.hash());
    const std::size_t nw = sched.size();
    std::vector<double> end_times(nw);
    for (std::size_t w = 0; w < nw; ++w) end_times[w] = sched.windows()[w].contact_end;
    auto run = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t s = lo; s < hi; ++s) {
            Substream rng(seed, rng_tag::kClassicalShot, s);
            const ClassicalSpinState spin = sample_uniform_spin(rng);
            for (std::size_t w = 0; w < nw; ++w)
                out.dval(s, w) = classical_output(spin, end_times[w], p);
        }
    };
    parallel_shots(shots, resolve_threads(threads, shots), run);
    return out;
}

ShotDataset attach_photon_readout(const ShotDataset& spins, const ReadoutModel& model,
                                  std::uint64_t seed) {
    if (spins.kind() != DatasetKind::Spin)
        throw std::domain_error("attach_photon_readout: needs a spin dataset");
    ShotDataset out(DatasetKind::Photon, spins.shots(), spins.labels(), seed,
                    spins.schedule_hash());
    const std::size_t nw = spins.windows();
    for (std::size_t s = 0; s < spins.shots(); ++s) {
        Substream rng(seed, rng_tag::kPhotonShot, s);
        for (std::size_t w = 0; w < nw; ++w) {
            const double mean = spins.value(s, w) > 0 ? model.n_plus : model.n_minus;
            const std::uint64_t n = rng.poisson(mean);
            if (n > 32767) throw std::runtime_error("attach_photon_readout: count overflow");
            out.ival(s, w) = std::int16_t(n);
        }
    }
    return out;
}

namespace {

struct TuplePlan {
    std::vector<std::size_t> cols;
};

// per-shot centred product sums for one subset of shots
void accumulate(const ShotDataset& ds, const std::vector<TuplePlan>& plans,
                const std::vector<double>& means, std::size_t lo, std::size_t hi,
                std::vector<double>& sums) {
    const std::size_t nw = ds.windows();
    std::vector<double> row(nw);
    for (std::size_t s = lo; s < hi; ++s) {
        for (std::size_t w = 0; w < nw; ++w) row[w] = ds.value(s, w) - means[w];
        for (std::size_t t = 0; t < plans.size(); ++t) {
            double prod = 1.0;
            for (std::size_t c : plans[t].cols) prod *= row[c];
            sums[t] += prod;
        }
    }
}

}  // namespace

EstimationResult estimate_correlations(const ShotDataset& ds,
                                       const std::vector<CorrelationRequest>& reqs,
                                       std::size_t resamples, std::uint64_t resample_seed) {
    if (reqs.empty()) throw std::domain_error("estimate_correlations: no requests");
    if (ds.shots() < 2) throw std::domain_error("estimate_correlations: need >= 2 shots");
    const std::size_t shots = ds.shots();
    const std::size_t nw = ds.windows();
    const std::size_t nt = reqs.size();

    std::vector<TuplePlan> plans(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        if (reqs[t].labels.empty())
            throw std::domain_error("estimate_correlations: empty tuple");
        for (const auto& lab : reqs[t].labels) plans[t].cols.push_back(ds.index_of(lab));
    }

    // window means (subtracted in-sample)
    std::vector<double> means(nw, 0.0);
    for (std::size_t s = 0; s < shots; ++s)
        for (std::size_t w = 0; w < nw; ++w) means[w] += ds.value(s, w);
    for (auto& m : means) m /= double(shots);

    // Block partition: per-block product sums let each bootstrap resample be
    // a weighted recombination instead of a pass over all shots.
    const std::size_t n_blocks = std::min<std::size_t>(shots, 4096);
    const std::size_t base = shots / n_blocks, extra = shots % n_blocks;
    std::vector<std::vector<double>> block_sums(n_blocks, std::vector<double>(nt, 0.0));
    std::vector<double> block_len(n_blocks);
    std::size_t cur = 0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const std::size_t len = base + (b < extra ? 1 : 0);
        accumulate(ds, plans, means, cur, cur + len, block_sums[b]);
        block_len[b] = double(len);
        cur += len;
    }

    EstimationResult res;
    res.estimates.resize(nt);
    res.replicates.assign(nt, std::vector<double>(resamples, 0.0));
    for (std::size_t t = 0; t < nt; ++t) {
        double total = 0.0;
        for (std::size_t b = 0; b < n_blocks; ++b) total += block_sums[b][t];
        res.estimates[t].labels = reqs[t].labels;
        res.estimates[t].value = total / double(shots);
    }

    if (resamples < 2) throw std::domain_error("estimate_correlations: resamples < 2");
    Substream rng(resample_seed, rng_tag::kBootstrap, ds.seed());
    std::vector<double> sums(nt), count(1);
    for (std::size_t r = 0; r < resamples; ++r) {
        std::fill(sums.begin(), sums.end(), 0.0);
        double n_eff = 0.0;
        for (std::size_t b = 0; b < n_blocks; ++b) {
            const std::size_t pick = std::size_t(rng.uniform() * double(n_blocks));
            const std::size_t j = std::min(pick, n_blocks - 1);
            for (std::size_t t = 0; t < nt; ++t) sums[t] += block_sums[j][t];
            n_eff += block_len[j];
        }
        for (std::size_t t = 0; t < nt; ++t) res.replicates[t][r] = sums[t] / n_eff;
    }
    for (std::size_t t = 0; t < nt; ++t) {
        double mean = 0.0;
        for (double v : res.replicates[t]) mean += v;
        mean /= double(resamples);
        double var = 0.0;
        for (double v : res.replicates[t]) var += (v - mean) * (v - mean);
        res.estimates[t].std_error = std::sqrt(var / double(resamples - 1));
    }
    return res;
}

ShotDataset sequential_run(std::size_t count, const ModelParams& p, std::size_t shots,
                           std::uint64_t seed, unsigned threads) {
    return simulate_quantum(MeasurementSchedule::sequential(count, p), p, shots, seed, threads);
}

EstimationResult binned_correlations(const ShotDataset& ds, std::size_t p_bin,
                                     const std::vector<std::vector<std::size_t>>& bin_tuples,
                                     std::size_t resamples, std::uint64_t resample_seed) {
    if (p_bin == 0) throw std::domain_error("binned_correlations: p_bin == 0");
    const std::size_t n_bins = ds.windows() / p_bin;
    if (n_bins == 0) throw std::domain_error("binned_correlations: no full bin");

    std::vector<std::string> bin_labels(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) bin_labels[b] = "bin" + std::to_string(b);
    ShotDataset binned(DatasetKind::Analog, ds.shots(), bin_labels, ds.seed(),
                       ds.schedule_hash() ^ (0x6b1du + p_bin));
    for (std::size_t s = 0; s < ds.shots(); ++s)
        for (std::size_t b = 0; b < n_bins; ++b) {
            double acc = 0.0;
            for (std::size_t k = 0; k < p_bin; ++k) acc += ds.value(s, b * p_bin + k);
            binned.dval(s, b) = acc;
        }

    std::vector<CorrelationRequest> reqs;
    for (const auto& tup : bin_tuples) {
        CorrelationRequest r;
        for (std::size_t b : tup) {
            if (b >= n_bins) throw std::domain_error("binned_correlations: bin out of range");
            r.labels.push_back(bin_labels[b]);
        }
        reqs.push_back(std::move(r));
    }
    return estimate_correlations(binned, reqs, resamples, resample_seed);
}

}  // namespace mrsim
