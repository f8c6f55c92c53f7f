#include "lvs/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lvs/csv.hpp"
#include "lvs/error.hpp"
#include "lvs/num.hpp"

namespace lvs {

namespace {

std::string trimmed(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return std::string(s);
}

std::string lower_ascii(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    return s;
}

int parse_binary_label(const std::string& raw, const std::string& where) {
    if (auto v = parse_double(raw)) {
        if (*v == 0.0) return 0;
        if (*v == 1.0) return 1;
    } else {
        const std::string low = lower_ascii(trimmed(raw));
        if (low == "normal") return 0;
        if (low == "attack") return 1;
    }
    throw DataError(where + ": label '" + raw + "' is not binary (expected 0/1 or normal/attack)");
}

// Parsed CSV with special columns split off.
struct Table {
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;  // rows x features
    std::vector<int> binary_labels;
    std::vector<std::string> bin_labels;
    std::vector<double> denominators;
};

Table read_table(const std::filesystem::path& csv, const IngestConfig& config,
                 bool with_denominator) {
    CsvReader reader(csv);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw DataError("'" + csv.string() + "' is empty");

    std::vector<std::string> header;
    header.reserve(fields.size());
    for (const auto& h : fields) header.push_back(trimmed(h));

    auto locate = [&](const std::optional<std::string>& name) -> long {
        if (!name) return -1;
        auto it = std::find(header.begin(), header.end(), *name);
        if (it == header.end())
            throw DataError("'" + csv.string() + "': no column named '" + *name + "'");
        return it - header.begin();
    };
    const long label_col = locate(config.label_column);
    const long bin_label_col = locate(config.bin_label_column);
    const long denom_col = with_denominator ? locate(config.denominator_column) : -1;

    Table t;
    std::vector<long> feature_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const long lc = static_cast<long>(c);
        if (lc == label_col || lc == bin_label_col || lc == denom_col) continue;
        t.feature_names.push_back(header[c]);
        feature_cols.push_back(lc);
    }
    if (feature_cols.empty()) throw DataError("'" + csv.string() + "': no feature columns");

    while (reader.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        const std::string where =
            "'" + csv.string() + "' row " + std::to_string(reader.record_number());
        if (fields.size() != header.size())
            throw DataError(where + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(feature_cols.size());
        for (std::size_t f = 0; f < feature_cols.size(); ++f) {
            const std::string& cell = fields[feature_cols[f]];
            auto v = parse_double(cell);
            if (!v || !std::isfinite(*v))
                throw DataError(where + ", column '" + t.feature_names[f] +
                                "': not a finite number: '" + cell + "'");
            row.push_back(*v);
        }
        t.rows.push_back(std::move(row));
        if (label_col >= 0)
            t.binary_labels.push_back(parse_binary_label(fields[label_col], where));
        if (bin_label_col >= 0) t.bin_labels.push_back(trimmed(fields[bin_label_col]));
        if (denom_col >= 0) {
            auto v = parse_double(fields[denom_col]);
            if (!v || !(*v > 0.0) || !std::isfinite(*v))
                throw DataError(where + ": denominator '" + fields[denom_col] +
                                "' must be a positive number");
            t.denominators.push_back(*v);
        }
    }
    if (t.rows.empty()) throw DataError("'" + csv.string() + "' has no data rows");
    return t;
}

IngestResult assemble(Table&& t, std::vector<std::vector<double>>&& weights) {
    IngestResult result;
    for (auto& name : t.feature_names) result.timeline.vocabulary.add(name);
    result.timeline.bins.reserve(weights.size());
    for (std::size_t r = 0; r < weights.size(); ++r) {
        std::vector<SparseEntry> raw;
        for (std::size_t f = 0; f < weights[r].size(); ++f)
            if (weights[r][f] > 0.0) raw.push_back({static_cast<FeatureId>(f), weights[r][f]});
        if (raw.empty())
            throw DataError("bin " + std::to_string(r) + " has no positive mass");
        result.timeline.bins.push_back(SparseDistribution::normalized(std::move(raw)));
    }
    result.timeline.bin_labels = std::move(t.bin_labels);
    result.binary_labels = std::move(t.binary_labels);
    return result;
}

// Removes feature columns listed in `drop` (ascending) from names and rows.
void drop_columns(Table& t, const std::vector<std::size_t>& drop) {
    if (drop.empty()) return;
    auto keep = [&drop](std::size_t c) {
        return !std::binary_search(drop.begin(), drop.end(), c);
    };
    std::vector<std::string> names;
    for (std::size_t c = 0; c < t.feature_names.size(); ++c)
        if (keep(c)) names.push_back(std::move(t.feature_names[c]));
    t.feature_names = std::move(names);
    for (auto& row : t.rows) {
        std::vector<double> kept;
        kept.reserve(t.feature_names.size());
        for (std::size_t c = 0; c < row.size(); ++c)
            if (keep(c)) kept.push_back(row[c]);
        row = std::move(kept);
    }
}

}  // namespace

IngestResult ingest_numeric_table(const std::filesystem::path& csv, const IngestConfig& config) {
    Table t = read_table(csv, config, /*with_denominator=*/false);
    std::vector<std::string> warnings;

    if (config.normalization == Normalization::minmax_then_rowsum) {
        const std::size_t d = t.feature_names.size();
        std::vector<double> lo(d, std::numeric_limits<double>::infinity());
        std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
        for (const auto& row : t.rows)
            for (std::size_t c = 0; c < d; ++c) {
                lo[c] = std::min(lo[c], row[c]);
                hi[c] = std::max(hi[c], row[c]);
            }
        std::vector<std::size_t> degenerate;
        for (std::size_t c = 0; c < d; ++c)
            if (lo[c] == hi[c]) {
                degenerate.push_back(c);
                warnings.push_back("dropped constant column '" + t.feature_names[c] + "'");
            }
        if (degenerate.size() == d)
            throw DataError("'" + csv.string() + "': every feature column is constant");
        drop_columns(t, degenerate);
        std::vector<double> range;
        std::size_t keep = 0;
        for (std::size_t c = 0; c < d; ++c)
            if (!std::binary_search(degenerate.begin(), degenerate.end(), c)) {
                range.push_back(hi[c] - lo[c]);
                lo[keep++] = lo[c];
            }
        for (auto& row : t.rows)
            for (std::size_t c = 0; c < row.size(); ++c) row[c] = (row[c] - lo[c]) / range[c];
    } else {
        // Row-sum normalization needs nonnegative inputs; drop columns that
        // are zero everywhere so the vocabulary only holds live features.
        std::vector<std::size_t> dead;
        for (std::size_t c = 0; c < t.feature_names.size(); ++c) {
            bool any = false;
            for (const auto& row : t.rows) {
                if (row[c] < 0.0)
                    throw DataError("'" + csv.string() + "', column '" + t.feature_names[c] +
                                    "': negative value with rowsum normalization");
                if (row[c] > 0.0) any = true;
            }
            if (!any) {
                dead.push_back(c);
                warnings.push_back("dropped all-zero column '" + t.feature_names[c] + "'");
            }
        }
        if (dead.size() == t.feature_names.size())
            throw DataError("'" + csv.string() + "': every feature column is zero");
        drop_columns(t, dead);
    }

    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        double sum = 0.0;
        for (double v : t.rows[r]) sum += v;
        if (!(sum > 0.0))
            throw DataError("'" + csv.string() + "' row " + std::to_string(r + 2) +
                            ": all features are zero after scaling");
    }

    auto rows = std::move(t.rows);
    IngestResult result = assemble(std::move(t), std::move(rows));
    result.warnings = std::move(warnings);
    return result;
}

IngestResult ingest_count_table(const std::filesystem::path& csv, const IngestConfig& config) {
    Table t = read_table(csv, config, /*with_denominator=*/true);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        double total = 0.0;
        for (std::size_t c = 0; c < t.rows[r].size(); ++c) {
            if (t.rows[r][c] < 0.0)
                throw DataError("'" + csv.string() + "' row " + std::to_string(r + 2) +
                                ", column '" + t.feature_names[c] + "': negative count");
            if (!t.denominators.empty()) t.rows[r][c] /= t.denominators[r];
            total += t.rows[r][c];
        }
        if (!(total > 0.0))
            throw DataError("'" + csv.string() + "' row " + std::to_string(r + 2) +
                            ": no positive counts");
    }
    auto rows = std::move(t.rows);
    return assemble(std::move(t), std::move(rows));
}

namespace {

// Letter test over a pragmatic set of Unicode ranges (Latin, Greek,
// Cyrillic, Armenian, Hebrew, Arabic, kana, CJK).
bool is_letter(char32_t cp) {
    if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
    if (cp < 0x00C0) return false;
    if (cp <= 0x00FF) return cp != 0x00D7 && cp != 0x00F7;
    if (cp <= 0x024F) return true;   // Latin extended
    if (cp >= 0x0370 && cp <= 0x03FF) return true;
    if (cp >= 0x0400 && cp <= 0x04FF) return true;
    if (cp >= 0x0530 && cp <= 0x058F) return true;
    if (cp >= 0x05D0 && cp <= 0x05EA) return true;
    if (cp >= 0x0620 && cp <= 0x064A) return true;
    if (cp >= 0x3040 && cp <= 0x30FF) return true;
    if (cp >= 0x4E00 && cp <= 0x9FFF) return true;
    return false;
}

char32_t to_lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 32;
    if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;  // Latin-1
    return cp;
}

// Decodes one UTF-8 codepoint at `i`, advancing it. Malformed bytes come
// back as U+FFFD (a non-letter, so they just split tokens).
char32_t decode_utf8(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i++]);
    if (b0 < 0x80) return b0;
    int extra;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
        extra = 1;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        extra = 2;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        extra = 3;
        cp = b0 & 0x07;
    } else {
        return 0xFFFD;
    }
    for (int k = 0; k < extra; ++k) {
        if (i >= s.size() || (static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) return 0xFFFD;
        cp = (cp << 6) | (static_cast<unsigned char>(s[i++]) & 0x3F);
    }
    return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_apostrophe(char32_t cp) { return cp == 0x27 || cp == 0x2019; }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        const std::size_t at = i;
        const char32_t cp = decode_utf8(text, i);
        if (is_letter(cp)) {
            encode_utf8(to_lower(cp), current);
            continue;
        }
        if (is_apostrophe(cp) && !current.empty() && i < text.size()) {
            std::size_t ahead = i;
            if (is_letter(decode_utf8(text, ahead))) {
                current.push_back('\'');  // curly quotes normalize to ASCII
                continue;
            }
        }
        (void)at;
        if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open stopword file '" + path.string() + "'");
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line))
        for (auto& tok : tokenize(line)) words.insert(std::move(tok));
    return words;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::pair<std::string, std::string>> collect_documents(
    const std::filesystem::path& path) {
    std::vector<std::pair<std::string, std::string>> docs;
    if (std::filesystem::is_directory(path)) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(path))
            if (entry.is_regular_file() && entry.path().extension() == ".txt")
                files.push_back(entry.path());
        if (files.empty())
            throw DataError("no .txt documents in directory '" + path.string() + "'");
        std::sort(files.begin(), files.end());
        for (const auto& f : files) docs.emplace_back(f.stem().string(), read_file(f));
        return docs;
    }

    // JSON-lines: one {"label": ..., "text": ...} object per line.
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = "'" + path.string() + "' line " + std::to_string(line_no);
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw DataError(where + ": not a JSON object");
        if (!j.contains("label") || !j.contains("text") || !j["text"].is_string())
            throw DataError(where + ": expected string fields 'label' and 'text'");
        std::string label = j["label"].is_string() ? j["label"].get<std::string>()
                                                   : nlohmann::to_string(j["label"]);
        docs.emplace_back(std::move(label), j["text"].get<std::string>());
    }
    if (docs.empty()) throw DataError("'" + path.string() + "' has no documents");
    return docs;
}

}  // namespace

IngestResult ingest_text_corpus(const std::filesystem::path& path, const IngestConfig& config) {
    std::unordered_set<std::string> stopwords;
    if (config.stopword_path) stopwords = load_stopwords(*config.stopword_path);

    auto docs = collect_documents(path);

    // Group documents by label, bins ordered by first appearance.
    std::vector<std::string> bin_order;
    std::unordered_map<std::string, std::size_t> bin_of;
    std::vector<std::unordered_map<FeatureId, double>> counts;
    std::vector<double> totals;

    IngestResult result;
    for (auto& [label, text] : docs) {
        auto [it, inserted] = bin_of.emplace(label, bin_order.size());
        if (inserted) {
            bin_order.push_back(label);
            counts.emplace_back();
            totals.push_back(0.0);
        }
        const std::size_t b = it->second;
        for (auto& tok : tokenize(text)) {
            if (stopwords.count(tok)) continue;
            counts[b][result.timeline.vocabulary.add(tok)] += 1.0;
            totals[b] += 1.0;
        }
    }

    for (std::size_t b = 0; b < bin_order.size(); ++b) {
        if (!(totals[b] > 0.0))
            throw DataError("bin '" + bin_order[b] + "' is empty after stopword filtering");
        std::vector<SparseEntry> raw;
        raw.reserve(counts[b].size());
        for (const auto& [id, c] : counts[b]) raw.push_back({id, c});
        result.timeline.bins.push_back(SparseDistribution::normalized(std::move(raw)));
    }
    result.timeline.bin_labels = std::move(bin_order);
    return result;
}

}  // namespace lvs
