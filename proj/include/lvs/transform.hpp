#pragma once

#include <vector>

#include "lvs/timeline.hpp"

namespace lvs {

// Which surprisal entries a profile keeps after filtering.
//   fixed:    keep entries with |value| > theta (theta in bits, >= 0)
//   quantile: keep entries with |value| above the per-bin q-quantile
//             of entry magnitudes, 0 < q < 1
//   none:     keep everything
struct ThresholdPolicy {
    enum class Mode { fixed, quantile, none };

    Mode mode = Mode::fixed;
    double theta = 0.0;
    double q = 0.9;

    static ThresholdPolicy fixed(double theta) { return {Mode::fixed, theta, 0.9}; }
    static ThresholdPolicy quantile(double q) { return {Mode::quantile, 0.0, q}; }
    static ThresholdPolicy none() { return {Mode::none, 0.0, 0.9}; }

    // Throws DataError on out-of-range parameters.
    void check() const;
};

// Builds the timeline center: the per-feature mean of the bin distributions,
// counting a feature missing from a bin as zero. Every bin contributes equal
// weight 1/N, so the result is itself a probability distribution.
TimelineCenter build_tcr(const Timeline& t);

// The midpoint distribution (center + bin)/2, densified over the vocabulary.
std::vector<double> mixture(const TimelineCenter& tcr, const SparseDistribution& bin);

// Signed divergence contribution of one feature: the feature's share of the
// Jensen-Shannon divergence (base 2) between the center value `t` and the
// bin value `p`, carrying sign(p - t). Zero iff p == t. A feature absent
// from the bin (p = 0) contributes exactly -t/2.
double signed_surprisal(double t, double p);

// Per-feature signed JSD decomposition of `bin` against `tcr`. The profile's
// divergence is the sum of entry magnitudes over the whole vocabulary and
// equals the (bounded, symmetric) Jensen-Shannon divergence of the pair.
SurprisabilityProfile surprisability_profile(const TimelineCenter& tcr,
                                             const SparseDistribution& bin,
                                             std::size_t bin_index);

// Filtered copy of `sp` keeping only entries the policy retains. The scalar
// divergence is preserved unchanged; it is defined over the full vocabulary.
SurprisabilityProfile apply_threshold(const SurprisabilityProfile& sp,
                                      const ThresholdPolicy& policy);

struct TransformResult {
    TimelineCenter tcr;
    std::vector<SurprisabilityProfile> profiles;  // thresholded, in bin order
    std::vector<double> divergences;              // one per bin, in bin order
};

// Full pipeline: center, per-bin profile, threshold. Per-bin work may run on
// up to `threads` workers; results are assembled in bin order and are
// byte-identical for any thread count.
TransformResult transform_timeline(const Timeline& t, const ThresholdPolicy& policy,
                                   unsigned threads = 1);

}  // namespace lvs
