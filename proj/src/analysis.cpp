#include "lvs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "lvs/error.hpp"
#include "lvs/transform.hpp"

namespace lvs {

namespace {

constexpr double kProfileSumTolerance = 1e-9;

double l1_distance(std::span<const SparseEntry> a, std::span<const SparseEntry> b) {
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].id == b[j].id) {
            d += std::abs(a[i].value - b[j].value);
            ++i, ++j;
        } else if (a[i].id < b[j].id) {
            d += std::abs(a[i].value);
            ++i;
        } else {
            d += std::abs(b[j].value);
            ++j;
        }
    }
    for (; i < a.size(); ++i) d += std::abs(a[i].value);
    for (; j < b.size(); ++j) d += std::abs(b[j].value);
    return d;
}

struct LabeledScore {
    double score;
    int label;
};

std::vector<LabeledScore> require_labels(std::span<const ScoredBin> scores) {
    std::vector<LabeledScore> out;
    out.reserve(scores.size());
    for (const auto& s : scores) {
        if (!s.label)
            throw DataError("bin " + std::to_string(s.bin_index) + " has no label");
        out.push_back({s.score, *s.label});
    }
    if (out.empty()) throw DataError("no scores to evaluate");
    return out;
}

double f1_of(double precision, double recall) {
    const double pr = precision + recall;
    return pr > 0.0 ? 2.0 * precision * recall / pr : 0.0;
}

// Mann-Whitney AUC over average ranks, ties counted one half.
std::optional<double> rank_auc(std::vector<LabeledScore> data) {
    long long npos = 0;
    for (const auto& d : data) npos += d.label;
    const long long nneg = static_cast<long long>(data.size()) - npos;
    if (npos == 0 || nneg == 0) return std::nullopt;
    std::sort(data.begin(), data.end(),
              [](const LabeledScore& a, const LabeledScore& b) { return a.score < b.score; });
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < data.size()) {
        std::size_t j = i;
        while (j < data.size() && data[j].score == data[i].score) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
        for (std::size_t k = i; k < j; ++k)
            if (data[k].label == 1) rank_sum_pos += avg_rank;
        i = j;
    }
    const double u = rank_sum_pos - 0.5 * static_cast<double>(npos) * static_cast<double>(npos + 1);
    return u / (static_cast<double>(npos) * static_cast<double>(nneg));
}

}  // namespace

std::vector<ScoredBin> anomaly_scores(std::span<const double> divergences,
                                      std::span<const int> labels) {
    if (!labels.empty() && labels.size() != divergences.size())
        throw DataError("have " + std::to_string(labels.size()) + " labels for " +
                        std::to_string(divergences.size()) + " scores");
    std::vector<ScoredBin> out;
    out.reserve(divergences.size());
    for (std::size_t i = 0; i < divergences.size(); ++i) {
        ScoredBin s;
        s.bin_index = i;
        s.score = divergences[i];
        if (!labels.empty()) s.label = labels[i];
        out.push_back(s);
    }
    return out;
}

double break_even_threshold(std::span<const ScoredBin> scores) {
    auto data = require_labels(scores);
    long long npos = 0;
    for (const auto& d : data) npos += d.label;
    const long long nneg = static_cast<long long>(data.size()) - npos;
    if (npos == 0 || nneg == 0) throw DataError("labels contain a single class");

    // Sweep cutoffs from high to low; at each distinct score value the
    // predicted-positive set is everything at or above it.
    std::sort(data.begin(), data.end(),
              [](const LabeledScore& a, const LabeledScore& b) { return a.score > b.score; });
    double best_gap = 0.0, best_f1 = 0.0, best_cut = 0.0;
    bool have_best = false;
    long long tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < data.size()) {
        const double cut = data[i].score;
        while (i < data.size() && data[i].score == cut) {
            tp += data[i].label;
            fp += 1 - data[i].label;
            ++i;
        }
        const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        const double recall = static_cast<double>(tp) / static_cast<double>(npos);
        const double gap = std::abs(precision - recall);
        const double f1 = f1_of(precision, recall);
        const bool better = !have_best || gap < best_gap ||
                            (gap == best_gap && f1 > best_f1) ||
                            (gap == best_gap && f1 == best_f1 && cut < best_cut);
        if (better) {
            best_gap = gap;
            best_f1 = f1;
            best_cut = cut;
            have_best = true;
        }
    }
    return best_cut;
}

EvaluationReport evaluate(std::span<const ScoredBin> scores, double threshold) {
    auto data = require_labels(scores);
    EvaluationReport r;
    r.threshold = threshold;
    for (const auto& d : data) {
        const bool predicted = d.score >= threshold;
        if (d.label == 1)
            predicted ? ++r.tp : ++r.fn;
        else
            predicted ? ++r.fp : ++r.tn;
    }
    const long long npos = r.tp + r.fn;
    r.precision = (r.tp + r.fp) > 0 ? static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp)
                                    : 0.0;
    r.recall = npos > 0 ? static_cast<double>(r.tp) / static_cast<double>(npos) : 0.0;
    r.f1 = f1_of(r.precision, r.recall);
    r.accuracy = static_cast<double>(r.tp + r.tn) / static_cast<double>(data.size());
    r.auc = rank_auc(std::move(data));
    return r;
}

std::vector<EvaluationReport> threshold_sensitivity(std::span<const ScoredBin> scores,
                                                    double base_threshold,
                                                    std::span<const double> offsets) {
    std::vector<EvaluationReport> rows;
    rows.reserve(offsets.size());
    for (double off : offsets) rows.push_back(evaluate(scores, base_threshold * (1.0 + off)));
    return rows;
}

VariabilityRanking variability_ranking(std::span<const SurprisabilityProfile> sps) {
    std::unordered_map<FeatureId, double> acc;
    for (const auto& sp : sps) {
        double sum = 0.0;
        for (const auto& e : sp.signed_values) sum += std::abs(e.value);
        if (std::abs(sum - sp.divergence) > kProfileSumTolerance)
            throw DataError("profile of bin " + std::to_string(sp.bin_index) +
                            " looks thresholded: entry magnitudes sum to " +
                            std::to_string(sum) + " but divergence is " +
                            std::to_string(sp.divergence));
        for (const auto& e : sp.signed_values) acc[e.id] += std::abs(e.value);
    }
    VariabilityRanking ranking;
    ranking.entries.reserve(acc.size());
    for (const auto& [id, total] : acc)
        if (total > 0.0) ranking.entries.push_back({id, total});
    std::sort(ranking.entries.begin(), ranking.entries.end(),
              [](const SparseEntry& a, const SparseEntry& b) {
                  if (a.value != b.value) return a.value > b.value;
                  return a.id < b.id;
              });
    return ranking;
}

std::vector<TrajectoryPoint> feature_trajectory(const Timeline& t, const TimelineCenter& tcr,
                                                std::string_view feature_name) {
    auto id = t.vocabulary.find(feature_name);
    if (!id) throw DataError("unknown feature '" + std::string(feature_name) + "'");
    if (*id >= tcr.values.size())
        throw DataError("center does not cover feature '" + std::string(feature_name) + "'");
    std::vector<TrajectoryPoint> series;
    series.reserve(t.bins.size());
    for (const auto& bin : t.bins) {
        const double p = bin.weight(*id);
        series.push_back({signed_surprisal(tcr.values[*id], p), p});
    }
    return series;
}

DistanceMatrix distance_matrix(std::span<const std::span<const SparseEntry>> vectors,
                               bool normalize, std::vector<std::string> labels) {
    const std::size_t n = vectors.size();
    if (n < 2) throw DataError("need at least 2 vectors for a distance matrix");
    if (!labels.empty() && labels.size() != n)
        throw DataError("have " + std::to_string(labels.size()) + " labels for " +
                        std::to_string(n) + " vectors");
    DistanceMatrix m;
    m.n = n;
    m.values.assign(n * n, 0.0);
    if (labels.empty())
        for (std::size_t i = 0; i < n; ++i) m.labels.push_back(std::to_string(i));
    else
        m.labels = std::move(labels);

    double max_entry = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = l1_distance(vectors[i], vectors[j]);
            m.at(i, j) = d;
            m.at(j, i) = d;
            max_entry = std::max(max_entry, d);
        }
    if (normalize && max_entry > 0.0) {
        for (auto& v : m.values) v /= max_entry;
        m.normalized = true;
    } else {
        m.normalized = normalize;
    }
    return m;
}

DistanceMatrix pairwise_group_distance(std::span<const SurprisabilityProfile> sps,
                                       std::span<const std::string> group_keys) {
    if (sps.empty()) throw DataError("no profiles to group");
    if (group_keys.size() != sps.size())
        throw DataError("have " + std::to_string(group_keys.size()) + " group keys for " +
                        std::to_string(sps.size()) + " profiles");

    std::vector<std::string> order;                       // first-appearance order
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < sps.size(); ++i) {
        auto [it, inserted] = index.emplace(group_keys[i], order.size());
        if (inserted) {
            order.push_back(group_keys[i]);
            members.emplace_back();
        }
        members[it->second].push_back(i);
    }

    const std::size_t g = order.size();
    DistanceMatrix m;
    m.n = g;
    m.labels = order;
    m.values.assign(g * g, 0.0);
    for (std::size_t a = 0; a < g; ++a) {
        for (std::size_t b = a; b < g; ++b) {
            double sum = 0.0;
            std::size_t pairs = 0;
            if (a == b) {
                const auto& grp = members[a];
                for (std::size_t i = 0; i < grp.size(); ++i)
                    for (std::size_t j = i + 1; j < grp.size(); ++j) {
                        sum += l1_distance(sps[grp[i]].signed_values, sps[grp[j]].signed_values);
                        ++pairs;
                    }
            } else {
                for (std::size_t i : members[a])
                    for (std::size_t j : members[b]) {
                        sum += l1_distance(sps[i].signed_values, sps[j].signed_values);
                        ++pairs;
                    }
            }
            const double mean = pairs > 0 ? sum / static_cast<double>(pairs) : 0.0;
            m.at(a, b) = mean;
            m.at(b, a) = mean;
        }
    }
    return m;
}

DenseMatrix scale_for_clustering(std::span<const SurprisabilityProfile> sps,
                                 std::size_t n_features) {
    DenseMatrix m(sps.size(), n_features, 0.4);
    for (std::size_t r = 0; r < sps.size(); ++r)
        for (const auto& e : sps[r].signed_values) {
            if (e.id >= n_features)
                throw DataError("feature id " + std::to_string(e.id) +
                                " outside matrix width " + std::to_string(n_features));
            m.at(r, e.id) = 10.0 * e.value + 0.4;
        }
    return m;
}

namespace {

// Deterministic scramble for eigensolver start vectors.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Dominant eigenpair of the symmetric PSD matrix `a` (s x s, row-major) by
// power iteration. Returns the Rayleigh quotient; `v` holds the unit vector.
double power_iteration(const std::vector<double>& a, std::size_t s, std::vector<double>& v,
                       std::uint64_t salt) {
    std::uint64_t state = 0x5DEECE66DULL + salt;
    v.assign(s, 0.0);
    double norm = 0.0;
    for (auto& x : v) {
        x = unit_double(splitmix64(state)) - 0.5;
        norm += x * x;
    }
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;

    std::vector<double> next(s);
    for (int iter = 0; iter < 5000; ++iter) {
        for (std::size_t i = 0; i < s; ++i) {
            double acc = 0.0;
            const double* row = a.data() + i * s;
            for (std::size_t j = 0; j < s; ++j) acc += row[j] * v[j];
            next[i] = acc;
        }
        double len = 0.0;
        for (double x : next) len += x * x;
        len = std::sqrt(len);
        if (len == 0.0) {
            // v is in the null space; the matrix has no remaining mass here.
            return 0.0;
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < s; ++i) {
            next[i] /= len;
            delta = std::max(delta, std::abs(next[i] - v[i]));
        }
        v.swap(next);
        if (delta < 1e-14) break;
    }
    double lambda = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        double acc = 0.0;
        const double* row = a.data() + i * s;
        for (std::size_t j = 0; j < s; ++j) acc += row[j] * v[j];
        lambda += v[i] * acc;
    }
    return lambda;
}

}  // namespace

PcaResult pca_project(const DenseMatrix& m, std::size_t k) {
    const std::size_t n = m.rows, d = m.cols;
    if (k == 0) throw DataError("component count must be positive");
    if (k > std::min(n, d))
        throw DataError("component count " + std::to_string(k) + " exceeds min(rows, cols) = " +
                        std::to_string(std::min(n, d)));

    PcaResult result;
    result.projected = DenseMatrix(n, k, 0.0);
    result.components = DenseMatrix(k, d, 0.0);
    result.explained.assign(k, 0.0);

    std::vector<double> mean(d, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) mean[c] += m.at(r, c);
    for (auto& v : mean) v /= static_cast<double>(n);

    if (n < 2) return result;  // no variance to decompose
    const double denom = static_cast<double>(n - 1);

    // Work in whichever space is smaller: the d x d covariance or the
    // n x n Gram matrix of centered rows (same nonzero spectrum).
    const bool use_gram = n < d;
    const std::size_t s = use_gram ? n : d;
    std::vector<double> work(s * s, 0.0);
    if (use_gram) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t c = 0; c < d; ++c)
                    acc += (m.at(i, c) - mean[c]) * (m.at(j, c) - mean[c]);
                acc /= denom;
                work[i * s + j] = acc;
                work[j * s + i] = acc;
            }
    } else {
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t i = 0; i < d; ++i) {
                const double xi = m.at(r, i) - mean[i];
                for (std::size_t j = i; j < d; ++j) work[i * s + j] += xi * (m.at(r, j) - mean[j]);
            }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) {
                work[i * s + j] /= denom;
                work[j * s + i] = work[i * s + j];
            }
    }

    double trace = 0.0;
    for (std::size_t i = 0; i < s; ++i) trace += work[i * s + i];
    if (!(trace > 0.0)) return result;  // zero-variance input

    std::vector<double> w;
    double prev_lambda = std::numeric_limits<double>::infinity();
    for (std::size_t comp = 0; comp < k; ++comp) {
        double lambda = power_iteration(work, s, w, comp);
        lambda = std::min(lambda, prev_lambda);  // enforce the non-increasing contract
        if (lambda <= trace * 1e-12) break;      // remaining spectrum is numerically zero
        prev_lambda = lambda;
        result.explained[comp] = lambda / trace;

        // Deflate the working matrix.
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j) work[i * s + j] -= lambda * w[i] * w[j];

        // Map to a loading vector over the d columns.
        std::vector<double> loading(d, 0.0);
        if (use_gram) {
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < d; ++c)
                    loading[c] += w[r] * (m.at(r, c) - mean[c]);
            double len = 0.0;
            for (double x : loading) len += x * x;
            len = std::sqrt(len);
            if (len == 0.0) continue;
            for (auto& x : loading) x /= len;
        } else {
            loading = w;
        }

        // Sign convention: largest-magnitude loading positive, first index on ties.
        std::size_t arg = 0;
        for (std::size_t c = 1; c < d; ++c)
            if (std::abs(loading[c]) > std::abs(loading[arg])) arg = c;
        if (loading[arg] < 0.0)
            for (auto& x : loading) x = -x;

        for (std::size_t c = 0; c < d; ++c) result.components.at(comp, c) = loading[c];
        for (std::size_t r = 0; r < n; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < d; ++c) acc += (m.at(r, c) - mean[c]) * loading[c];
            result.projected.at(r, comp) = acc;
        }
    }
    return result;
}

namespace {

double sq_distance(const double* a, const double* b, std::size_t d) {
    double acc = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        const double diff = a[c] - b[c];
        acc += diff * diff;
    }
    return acc;
}

std::size_t count_distinct_rows(const DenseMatrix& m, std::size_t at_least) {
    std::unordered_set<std::string_view> seen;
    for (std::size_t r = 0; r < m.rows; ++r) {
        seen.insert(std::string_view(reinterpret_cast<const char*>(m.data.data() + r * m.cols),
                                     m.cols * sizeof(double)));
        if (seen.size() >= at_least) return seen.size();
    }
    return seen.size();
}

}  // namespace

KMeansResult kmeans_cluster(const DenseMatrix& m, std::size_t k, std::uint64_t seed) {
    const std::size_t n = m.rows, d = m.cols;
    if (k < 2) throw DataError("cluster count must be at least 2");
    if (n < k) throw DataError("fewer rows than clusters");
    if (count_distinct_rows(m, k) < k) throw DataError("fewer distinct rows than clusters");

    // k-means++ seeding. Raw engine draws keep the sequence identical across
    // platforms (distribution adapters are implementation-defined).
    std::mt19937_64 gen(seed);
    auto uniform01 = [&gen] { return unit_double(gen()); };

    DenseMatrix centroids(k, d, 0.0);
    std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
    {
        const std::size_t first = static_cast<std::size_t>(gen() % n);
        std::copy_n(m.data.data() + first * d, d, centroids.data.data());
    }
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double d2 =
                sq_distance(m.data.data() + r * d, centroids.data.data() + (c - 1) * d, d);
            dist2[r] = std::min(dist2[r], d2);
            total += dist2[r];
        }
        const double target = uniform01() * total;
        double cum = 0.0;
        std::size_t pick = n;  // falls back below if rounding walks past the end
        for (std::size_t r = 0; r < n; ++r) {
            if (dist2[r] <= 0.0) continue;
            cum += dist2[r];
            if (cum > target) {
                pick = r;
                break;
            }
        }
        if (pick == n)
            for (std::size_t r = n; r-- > 0;)
                if (dist2[r] > 0.0) {
                    pick = r;
                    break;
                }
        std::copy_n(m.data.data() + pick * d, d, centroids.data.data() + c * d);
    }

    KMeansResult result;
    result.assignments.assign(n, -1);
    std::vector<int> previous(n, -1);
    std::vector<std::size_t> sizes(k, 0);

    for (int iter = 0; iter < 300; ++iter) {
        // Assign to the nearest centroid, lowest index on ties.
        double objective = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            double best = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (std::size_t c = 0; c < k; ++c) {
                const double d2 =
                    sq_distance(m.data.data() + r * d, centroids.data.data() + c * d, d);
                if (d2 < best) {
                    best = d2;
                    best_c = static_cast<int>(c);
                }
            }
            result.assignments[r] = best_c;
            objective += best;
        }
        result.objective.push_back(objective);
        if (result.assignments == previous) break;
        previous = result.assignments;

        // Recompute centroids.
        std::fill(centroids.data.begin(), centroids.data.end(), 0.0);
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t r = 0; r < n; ++r) {
            const auto c = static_cast<std::size_t>(result.assignments[r]);
            ++sizes[c];
            double* row = centroids.data.data() + c * d;
            const double* src = m.data.data() + r * d;
            for (std::size_t j = 0; j < d; ++j) row[j] += src[j];
        }
        for (std::size_t c = 0; c < k; ++c)
            if (sizes[c] > 0) {
                double* row = centroids.data.data() + c * d;
                for (std::size_t j = 0; j < d; ++j) row[j] /= static_cast<double>(sizes[c]);
            }

        // Re-seed any emptied centroid to the point farthest from its own
        // centroid, skipping points that are their cluster's only member.
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            double worst = -1.0;
            std::size_t pick = 0;
            for (std::size_t r = 0; r < n; ++r) {
                const auto owner = static_cast<std::size_t>(result.assignments[r]);
                if (sizes[owner] <= 1) continue;
                const double d2 =
                    sq_distance(m.data.data() + r * d, centroids.data.data() + owner * d, d);
                if (d2 > worst) {
                    worst = d2;
                    pick = r;
                }
            }
            std::copy_n(m.data.data() + pick * d, d, centroids.data.data() + c * d);
            sizes[c] = 1;  // claims the point on the next assignment pass
        }
    }
    result.centroids = std::move(centroids);
    return result;
}

ClusterEvaluation cluster_vs_labels(std::span<const int> assignments, std::span<const int> labels) {
    if (assignments.size() != labels.size())
        throw DataError("have " + std::to_string(assignments.size()) + " assignments for " +
                        std::to_string(labels.size()) + " labels");
    if (assignments.empty()) throw DataError("nothing to evaluate");

    ClusterEvaluation ev;
    auto collect = [](std::span<const int> xs) {
        std::vector<int> vals(xs.begin(), xs.end());
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        return vals;
    };
    ev.label_values = collect(labels);
    ev.cluster_ids = collect(assignments);

    auto label_pos = [&ev](int v) {
        return static_cast<std::size_t>(
            std::lower_bound(ev.label_values.begin(), ev.label_values.end(), v) -
            ev.label_values.begin());
    };
    auto cluster_pos = [&ev](int v) {
        return static_cast<std::size_t>(
            std::lower_bound(ev.cluster_ids.begin(), ev.cluster_ids.end(), v) -
            ev.cluster_ids.begin());
    };

    ev.counts.assign(ev.label_values.size(), std::vector<long long>(ev.cluster_ids.size(), 0));
    std::vector<long long> label_totals(ev.label_values.size(), 0);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        ++ev.counts[label_pos(labels[i])][cluster_pos(assignments[i])];
        ++label_totals[label_pos(labels[i])];
    }

    double f1_sum = 0.0;
    for (std::size_t c = 0; c < ev.cluster_ids.size(); ++c) {
        ClusterStats st;
        st.cluster = ev.cluster_ids[c];
        long long size = 0, best = -1;
        std::size_t best_l = 0;
        for (std::size_t l = 0; l < ev.label_values.size(); ++l) {
            size += ev.counts[l][c];
            if (ev.counts[l][c] > best) {  // ties resolve to the smaller label
                best = ev.counts[l][c];
                best_l = l;
            }
        }
        st.size = size;
        st.mapped_label = ev.label_values[best_l];
        st.correct = best;
        st.precision = size > 0 ? static_cast<double>(best) / static_cast<double>(size) : 0.0;
        st.recall = label_totals[best_l] > 0
                        ? static_cast<double>(best) / static_cast<double>(label_totals[best_l])
                        : 0.0;
        st.f1 = f1_of(st.precision, st.recall);
        f1_sum += st.f1;
        ev.clusters.push_back(st);
    }
    ev.overall_f1 = f1_sum / static_cast<double>(ev.clusters.size());
    return ev;
}

}  // namespace lvs
