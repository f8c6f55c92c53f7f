#include "lvs/transform.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "lvs/error.hpp"

namespace lvs {

void ThresholdPolicy::check() const {
    switch (mode) {
        case Mode::fixed:
            if (!(theta >= 0.0) || !std::isfinite(theta))
                throw DataError("threshold theta must be finite and >= 0");
            break;
        case Mode::quantile:
            if (!(q > 0.0 && q < 1.0)) throw DataError("quantile must be in (0, 1)");
            break;
        case Mode::none:
            break;
    }
}

TimelineCenter build_tcr(const Timeline& t) {
    if (t.bins.empty()) throw DataError("no bins");
    const std::size_t dim = t.vocabulary.size();
    TimelineCenter center;
    center.n_bins = t.bins.size();
    center.values.assign(dim, 0.0);
    for (const auto& bin : t.bins)
        for (const auto& e : bin.entries) {
            if (e.id >= dim)
                throw DataError("feature id " + std::to_string(e.id) +
                                " outside vocabulary of size " + std::to_string(dim));
            center.values[e.id] += e.value;
        }
    const double inv = 1.0 / static_cast<double>(center.n_bins);
    for (auto& v : center.values) v *= inv;
    return center;
}

std::vector<double> mixture(const TimelineCenter& tcr, const SparseDistribution& bin) {
    std::vector<double> m(tcr.values.begin(), tcr.values.end());
    for (const auto& e : bin.entries) {
        if (e.id >= m.size())
            throw DataError("feature id " + std::to_string(e.id) +
                            " outside vocabulary of size " + std::to_string(m.size()));
        m[e.id] += e.value;
    }
    for (auto& v : m) v *= 0.5;
    return m;
}

double signed_surprisal(double t, double p) {
    // Relative tie band: the mean of N identical bins lands a few ulps off
    // the bin value, and contributions that deep are numerical dust, so a
    // feature within 1e-12 of the center counts as matching it.
    if (std::abs(p - t) <= 1e-12 * std::max(p, t)) return 0.0;
    double mag;
    if (p == 0.0) {
        mag = 0.5 * t;  // M = t/2, so the center term reduces to t/2 exactly
    } else if (t == 0.0) {
        mag = 0.5 * p;
    } else {
        const double m = 0.5 * (t + p);
        mag = 0.5 * t * std::log2(t / m) + 0.5 * p * std::log2(p / m);
        // The pair of terms is nonnegative by the log-sum inequality; guard
        // against rounding pushing a near-tie below zero.
        if (!(mag > 0.0)) return 0.0;
    }
    return p > t ? mag : -mag;
}

SurprisabilityProfile surprisability_profile(const TimelineCenter& tcr,
                                             const SparseDistribution& bin,
                                             std::size_t bin_index) {
    const std::size_t dim = tcr.values.size();
    SurprisabilityProfile sp;
    sp.bin_index = bin_index;

    std::size_t k = 0;
    double total = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        double p = 0.0;
        if (k < bin.entries.size() && bin.entries[k].id == j) {
            p = bin.entries[k].value;
            ++k;
        }
        const double s = signed_surprisal(tcr.values[j], p);
        if (s == 0.0) continue;
        total += std::abs(s);
        sp.signed_values.push_back({static_cast<FeatureId>(j), s});
    }
    if (k != bin.entries.size())
        throw DataError("feature id " + std::to_string(bin.entries[k].id) +
                        " outside vocabulary of size " + std::to_string(dim) +
                        " (or entries unsorted)");
    sp.divergence = total;
    return sp;
}

namespace {

// q-quantile of `xs` by linear interpolation between order statistics.
double interpolated_quantile(std::vector<double> xs, double q) {
    std::sort(xs.begin(), xs.end());
    const double h = q * static_cast<double>(xs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= xs.size()) return xs.back();
    const double frac = h - static_cast<double>(lo);
    return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

}  // namespace

SurprisabilityProfile apply_threshold(const SurprisabilityProfile& sp,
                                      const ThresholdPolicy& policy) {
    policy.check();
    if (policy.mode == ThresholdPolicy::Mode::none) return sp;

    SurprisabilityProfile out;
    out.bin_index = sp.bin_index;
    out.divergence = sp.divergence;
    if (sp.signed_values.empty()) return out;

    double cutoff = policy.theta;
    if (policy.mode == ThresholdPolicy::Mode::quantile) {
        std::vector<double> mags;
        mags.reserve(sp.signed_values.size());
        for (const auto& e : sp.signed_values) mags.push_back(std::abs(e.value));
        cutoff = interpolated_quantile(std::move(mags), policy.q);
    }
    for (const auto& e : sp.signed_values)
        if (std::abs(e.value) > cutoff) out.signed_values.push_back(e);
    return out;
}

TransformResult transform_timeline(const Timeline& t, const ThresholdPolicy& policy,
                                   unsigned threads) {
    policy.check();
    TransformResult result;
    result.tcr = build_tcr(t);
    const std::size_t n = t.bins.size();
    result.profiles.resize(n);
    result.divergences.resize(n);

    auto work = [&](std::size_t i) {
        SurprisabilityProfile sp = surprisability_profile(result.tcr, t.bins[i], i);
        result.divergences[i] = sp.divergence;
        result.profiles[i] = apply_threshold(sp, policy);
    };

    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) work(i);
        return result;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto runner = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                work(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = std::min<std::size_t>(threads, n);
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(runner);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return result;
}

}  // namespace lvs
