#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "lvs/timeline.hpp"

namespace lvs {

enum class SourceKind { numeric_table, count_table, text_corpus };

enum class Normalization { rowsum, minmax_then_rowsum };

struct IngestConfig {
    SourceKind kind = SourceKind::numeric_table;
    Normalization normalization = Normalization::minmax_then_rowsum;
    std::optional<std::string> stopword_path;       // text corpora only
    std::optional<std::string> label_column;        // binary 0/1 column, extracted
    std::optional<std::string> bin_label_column;    // display labels (years, timestamps)
    std::optional<std::string> denominator_column;  // count tables only
};

struct IngestResult {
    Timeline timeline;
    std::vector<int> binary_labels;     // nonempty only when label_column was extracted
    std::vector<std::string> warnings;  // e.g. dropped degenerate columns
};

// Headered CSV of numeric feature columns, one row per time bin. With
// minmax_then_rowsum each feature column is min-max scaled over the whole
// timeline first (constant columns are dropped with a warning); each row is
// then normalized to a unit-sum distribution.
IngestResult ingest_numeric_table(const std::filesystem::path& csv, const IngestConfig& config);

// Headered CSV of nonnegative count columns. Each row is divided by its
// denominator when one is configured, then renormalized to sum 1.
IngestResult ingest_count_table(const std::filesystem::path& csv, const IngestConfig& config);

// A directory of <bin_label>.txt documents (bins ordered by label) or one
// JSON-lines file of {"label": ..., "text": ...} records (bins ordered by
// first appearance; documents sharing a label share a bin). Documents are
// lowercased, tokenized into letter runs (apostrophes kept inside words),
// stopword-filtered, and counted into per-bin term distributions. No
// stemming or lemmatization; part-of-speech filtering is the caller's job.
IngestResult ingest_text_corpus(const std::filesystem::path& path, const IngestConfig& config);

// Lowercased letter-run tokens of `text`. Exposed for tests and callers
// that pre-filter token streams.
std::vector<std::string> tokenize(std::string_view text);

// One token per line; lines are themselves tokenized so the file tolerates
// stray whitespace and case.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

}  // namespace lvs
