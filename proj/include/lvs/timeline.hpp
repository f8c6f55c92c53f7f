#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lvs {

using FeatureId = std::uint32_t;

// Bidirectional map between feature names and dense ids in [0, size()).
// Ids are assigned in first-seen order; names are unique.
class FeatureVocabulary {
public:
    FeatureVocabulary() = default;
    explicit FeatureVocabulary(std::vector<std::string> names);

    // Returns the id of `name`, inserting it with the next id if new.
    FeatureId add(std::string_view name);

    std::optional<FeatureId> find(std::string_view name) const;
    const std::string& name(FeatureId id) const;
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };
    std::vector<std::string> names_;
    std::unordered_map<std::string, FeatureId, Hash, std::equal_to<>> index_;
};

// One sparse coordinate: a feature id and its value. Used both for
// probability weights and for signed surprisal values.
struct SparseEntry {
    FeatureId id = 0;
    double value = 0.0;

    bool operator==(const SparseEntry&) const = default;
};

// A probability distribution over the vocabulary for one time bin.
// Entries are sorted by id, strictly positive, and sum to 1 (within 1e-9);
// zeros are represented by absence.
struct SparseDistribution {
    std::vector<SparseEntry> entries;

    // Weight of `id`, 0 when absent. Binary search over entries.
    double weight(FeatureId id) const;

    double sum() const;

    // Normalizes `raw` (unsorted, duplicate-free) to unit sum, dropping
    // values below 1e-12 after normalization. Throws DataError when the
    // total mass is not positive and finite.
    static SparseDistribution normalized(std::vector<SparseEntry> raw);
};

// A timeline: an ordered sequence of time-bin distributions over one shared
// vocabulary, with optional display labels (years, timestamps, ...).
struct Timeline {
    FeatureVocabulary vocabulary;
    std::vector<SparseDistribution> bins;
    std::vector<std::string> bin_labels;  // empty, or one label per bin

    // The bin's label, or its index rendered as text when labels are absent.
    std::string label_of(std::size_t bin_index) const;
};

// The timeline center: per-feature mean relative frequency across all bins,
// absences counted as zero. Dense over the vocabulary; sums to 1.
struct TimelineCenter {
    std::vector<double> values;
    std::size_t n_bins = 0;
};

// Signed per-feature surprisal of one bin against the center, plus the
// bin's total divergence (the sum of entry magnitudes, in bits).
// Positive entries are over-represented features, negative under-represented
// or missing ones; features matching the center exactly carry no entry.
struct SurprisabilityProfile {
    std::size_t bin_index = 0;
    std::vector<SparseEntry> signed_values;  // sorted by id, all nonzero
    double divergence = 0.0;                 // in [0, 1] bits
};

// One broken invariant found by validate_timeline.
struct Violation {
    std::string rule;     // short identifier, e.g. "weight_sum"
    long bin_index = -1;  // -1 for timeline-level problems
    std::string feature;  // empty when not tied to one feature
    std::string message;
};

// Checks every Timeline invariant and reports all violations; never throws.
// An empty result means the timeline is well formed.
std::vector<Violation> validate_timeline(const Timeline& t);

std::string describe(const Violation& v);

// On-disk layout: a directory holding
//   vocab.txt   one feature name per line, line number = id
//   bins.csv    bin_index,feature_id,weight (17 significant digits)
//   labels.txt  optional, one display label per line
// Reading back what write_timeline wrote reproduces the weights bit for bit.
void write_timeline(const Timeline& t, const std::filesystem::path& dir);
Timeline read_timeline(const std::filesystem::path& dir);

}  // namespace lvs
