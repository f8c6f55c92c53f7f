#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lvs/timeline.hpp"

namespace lvs {

// One bin's anomaly score (its divergence); higher means more anomalous.
struct ScoredBin {
    std::size_t bin_index = 0;
    double score = 0.0;
    std::optional<int> label;  // 0 = normal, 1 = anomaly, when known
};

// Pairs divergences with optional binary labels. Pass an empty label span
// when no ground truth exists.
std::vector<ScoredBin> anomaly_scores(std::span<const double> divergences,
                                      std::span<const int> labels = {});

// The score cutoff minimizing |precision - recall| over all candidate
// cutoffs (each distinct score; predicted positive means score >= cutoff).
// Ties prefer higher F1, then the lower cutoff. Labels must contain both
// classes.
double break_even_threshold(std::span<const ScoredBin> scores);

struct EvaluationReport {
    long long tp = 0, fp = 0, tn = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0, accuracy = 0.0;
    std::optional<double> auc;  // absent when labels hold a single class
    double threshold = 0.0;
};

// Confusion and metrics at `threshold` (score >= threshold predicts
// anomaly). AUC is the rank statistic: the probability that a random
// positive outscores a random negative, ties counted one half.
EvaluationReport evaluate(std::span<const ScoredBin> scores, double threshold);

// One evaluation row per cutoff base*(1 + offset), in offset order.
std::vector<EvaluationReport> threshold_sensitivity(std::span<const ScoredBin> scores,
                                                    double base_threshold,
                                                    std::span<const double> offsets);

// Per-feature surprisal magnitude accumulated over all bins, sorted
// descending (ties by feature id). Features that never deviate are omitted.
struct VariabilityRanking {
    std::vector<SparseEntry> entries;
};

// Requires full (unthresholded) profiles: each profile's entry magnitudes
// must sum back to its divergence, otherwise the accumulation would
// silently undercount and the call fails.
VariabilityRanking variability_ranking(std::span<const SurprisabilityProfile> sps);

struct TrajectoryPoint {
    double surprisal = 0.0;  // signed, bits
    double frequency = 0.0;  // the feature's raw weight in the bin
};

// Per-bin (surprisal, frequency) series for one feature, for plot export.
std::vector<TrajectoryPoint> feature_trajectory(const Timeline& t, const TimelineCenter& tcr,
                                                std::string_view feature_name);

// Symmetric labeled matrix. Produced by distance_matrix (zero diagonal) and
// pairwise_group_distance (diagonal holds mean within-group distance).
struct DistanceMatrix {
    std::vector<std::string> labels;
    std::size_t n = 0;
    std::vector<double> values;  // row-major n*n
    bool normalized = false;

    double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

// Pairwise L1 (Manhattan) distances between sparse vectors, absent features
// counted as zero. With `normalize`, all entries are divided by the maximum
// entry (left untouched when the matrix is all zero).
DistanceMatrix distance_matrix(std::span<const std::span<const SparseEntry>> vectors,
                               bool normalize, std::vector<std::string> labels = {});

// Mean L1 distance between profiles across groups (e.g. one group per
// president). Off-diagonal entries average all cross pairs; the diagonal
// averages within-group pairs and is 0 for singleton groups. Groups are
// ordered by first appearance of their key.
DistanceMatrix pairwise_group_distance(std::span<const SurprisabilityProfile> sps,
                                       std::span<const std::string> group_keys);

struct DenseMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;  // row-major

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}
    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Densifies profiles and maps every coordinate x to 10x + 0.4, the affine
// rescale that keeps k-means inputs nonnegative for typical surprisals.
DenseMatrix scale_for_clustering(std::span<const SurprisabilityProfile> sps,
                                 std::size_t n_features);

struct PcaResult {
    DenseMatrix projected;           // rows x k coordinates
    std::vector<double> explained;   // eigenvalue / total variance, length k
    DenseMatrix components;          // k x cols loadings
};

// Projects rows onto the top-k principal axes of the column covariance,
// found by power iteration with deflation. Sign convention: each
// component's largest-magnitude loading is positive. Zero-variance input
// yields zero ratios and a zero projection.
PcaResult pca_project(const DenseMatrix& m, std::size_t k);

struct KMeansResult {
    std::vector<int> assignments;
    DenseMatrix centroids;
    std::vector<double> objective;  // within-cluster squared error per iteration
};

// Lloyd's algorithm with k-means++ seeding from `seed`; stops when
// assignments stabilize or after 300 iterations. An emptied cluster is
// re-seeded to the point farthest from its assigned centroid. Deterministic
// for a fixed seed.
KMeansResult kmeans_cluster(const DenseMatrix& m, std::size_t k, std::uint64_t seed);

struct ClusterStats {
    int cluster = 0;
    int mapped_label = 0;  // majority true label within the cluster
    long long size = 0;
    long long correct = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct ClusterEvaluation {
    std::vector<int> label_values;                 // distinct labels, ascending
    std::vector<int> cluster_ids;                  // distinct clusters, ascending
    std::vector<std::vector<long long>> counts;    // [label][cluster]
    std::vector<ClusterStats> clusters;
    double overall_f1 = 0.0;  // mean of per-cluster F1
};

// Confusion of cluster assignments against true labels, with per-cluster
// precision/recall/F1 under the majority-label mapping.
ClusterEvaluation cluster_vs_labels(std::span<const int> assignments,
                                    std::span<const int> labels);

}  // namespace lvs
