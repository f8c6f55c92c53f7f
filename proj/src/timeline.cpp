#include "lvs/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "lvs/csv.hpp"
#include "lvs/error.hpp"
#include "lvs/num.hpp"

namespace lvs {

namespace {
constexpr double kSumTolerance = 1e-9;
constexpr double kSupportFloor = 1e-12;
}

FeatureVocabulary::FeatureVocabulary(std::vector<std::string> names) : names_(std::move(names)) {
    index_.reserve(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) {
        auto [it, inserted] = index_.emplace(names_[i], static_cast<FeatureId>(i));
        if (!inserted) throw DataError("duplicate feature name '" + names_[i] + "'");
    }
}

FeatureId FeatureVocabulary::add(std::string_view name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    FeatureId id = static_cast<FeatureId>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
}

std::optional<FeatureId> FeatureVocabulary::find(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const std::string& FeatureVocabulary::name(FeatureId id) const {
    if (id >= names_.size()) throw DataError("feature id " + std::to_string(id) + " out of range");
    return names_[id];
}

double SparseDistribution::weight(FeatureId id) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), id,
                               [](const SparseEntry& e, FeatureId v) { return e.id < v; });
    if (it == entries.end() || it->id != id) return 0.0;
    return it->value;
}

double SparseDistribution::sum() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.value;
    return s;
}

SparseDistribution SparseDistribution::normalized(std::vector<SparseEntry> raw) {
    std::sort(raw.begin(), raw.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return a.id < b.id; });
    double total = 0.0;
    for (const auto& e : raw) {
        if (!(e.value >= 0.0) || !std::isfinite(e.value))
            throw DataError("negative or non-finite weight for feature id " + std::to_string(e.id));
        total += e.value;
    }
    if (!(total > 0.0) || !std::isfinite(total))
        throw DataError("distribution has no positive mass");
    SparseDistribution d;
    d.entries.reserve(raw.size());
    for (const auto& e : raw) {
        double w = e.value / total;
        if (w < kSupportFloor) continue;  // zeros and denormal dust stay out of the support
        d.entries.push_back({e.id, w});
    }
    if (d.entries.empty()) throw DataError("distribution has no positive mass");
    // Renormalize what survived the floor so the sum invariant holds exactly.
    double kept = 0.0;
    for (const auto& e : d.entries) kept += e.value;
    if (kept != 1.0)
        for (auto& e : d.entries) e.value /= kept;
    return d;
}

std::string Timeline::label_of(std::size_t bin_index) const {
    if (bin_index < bin_labels.size()) return bin_labels[bin_index];
    return std::to_string(bin_index);
}

std::vector<Violation> validate_timeline(const Timeline& t) {
    std::vector<Violation> out;
    auto flag = [&out](std::string rule, long bin, std::string feature, std::string msg) {
        out.push_back({std::move(rule), bin, std::move(feature), std::move(msg)});
    };

    const std::size_t dim = t.vocabulary.size();
    if (dim == 0) flag("empty_vocabulary", -1, "", "vocabulary has no features");
    if (t.bins.empty()) flag("no_bins", -1, "", "timeline has no bins");
    if (!t.bin_labels.empty() && t.bin_labels.size() != t.bins.size())
        flag("label_count", -1, "",
             "have " + std::to_string(t.bin_labels.size()) + " labels for " +
                 std::to_string(t.bins.size()) + " bins");

    for (std::size_t b = 0; b < t.bins.size(); ++b) {
        const auto& bin = t.bins[b];
        const long bi = static_cast<long>(b);
        double sum = 0.0;
        FeatureId prev = 0;
        bool first = true;
        for (const auto& e : bin.entries) {
            std::string fname = e.id < dim ? t.vocabulary.name(e.id) : std::to_string(e.id);
            if (e.id >= dim)
                flag("id_out_of_range", bi, fname,
                     "feature id " + std::to_string(e.id) + " >= vocabulary size " +
                         std::to_string(dim));
            if (!first && e.id <= prev)
                flag("entry_order", bi, fname, "entries not in strictly ascending id order");
            prev = e.id;
            first = false;
            if (!std::isfinite(e.value)) {
                flag("nonfinite_weight", bi, fname, "weight is not finite");
                continue;
            }
            if (e.value == 0.0)
                flag("stored_zero", bi, fname, "explicit zero weight stored");
            else if (e.value < 0.0)
                flag("negative_weight", bi, fname, "weight " + format_g17(e.value) + " < 0");
            sum += e.value;
        }
        if (std::abs(sum - 1.0) > kSumTolerance)
            flag("weight_sum", bi, "",
                 "weights sum to " + format_g17(sum) + ", expected 1 within 1e-9");
    }
    return out;
}

std::string describe(const Violation& v) {
    std::string s = v.rule;
    if (v.bin_index >= 0) s += " at bin " + std::to_string(v.bin_index);
    if (!v.feature.empty()) s += " feature '" + v.feature + "'";
    s += ": " + v.message;
    return s;
}

void write_timeline(const Timeline& t, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    {
        std::ofstream vocab(dir / "vocab.txt", std::ios::binary);
        if (!vocab) throw DataError("cannot write " + (dir / "vocab.txt").string());
        for (const auto& name : t.vocabulary.names()) {
            if (name.find_first_of("\r\n") != std::string::npos)
                throw DataError("feature name contains a line break: '" + name + "'");
            vocab << name << '\n';
        }
    }

    {
        std::ofstream bins(dir / "bins.csv", std::ios::binary);
        if (!bins) throw DataError("cannot write " + (dir / "bins.csv").string());
        bins << "bin_index,feature_id,weight\n";
        for (std::size_t b = 0; b < t.bins.size(); ++b)
            for (const auto& e : t.bins[b].entries)
                bins << b << ',' << e.id << ',' << format_g17(e.value) << '\n';
    }

    const auto labels_path = dir / "labels.txt";
    if (!t.bin_labels.empty()) {
        std::ofstream labels(labels_path, std::ios::binary);
        if (!labels) throw DataError("cannot write " + labels_path.string());
        for (const auto& l : t.bin_labels) {
            if (l.find_first_of("\r\n") != std::string::npos)
                throw DataError("bin label contains a line break: '" + l + "'");
            labels << l << '\n';
        }
    } else {
        std::filesystem::remove(labels_path);
    }
}

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

Timeline read_timeline(const std::filesystem::path& dir) {
    Timeline t;
    t.vocabulary = FeatureVocabulary(read_lines(dir / "vocab.txt"));

    CsvReader reader(dir / "bins.csv");
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw DataError("'" + (dir / "bins.csv").string() + "' is empty");
    if (fields.size() != 3 || fields[0] != "bin_index")
        throw DataError("'" + (dir / "bins.csv").string() +
                        "': expected header bin_index,feature_id,weight");
    while (reader.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
        const std::string where =
            (dir / "bins.csv").string() + " record " + std::to_string(reader.record_number());
        if (fields.size() != 3)
            throw DataError(where + ": expected 3 fields, got " + std::to_string(fields.size()));
        auto bin = parse_int(fields[0]);
        auto id = parse_int(fields[1]);
        auto w = parse_double(fields[2]);
        if (!bin || *bin < 0) throw DataError(where + ": bad bin_index '" + fields[0] + "'");
        if (!id || *id < 0) throw DataError(where + ": bad feature_id '" + fields[1] + "'");
        if (!w) throw DataError(where + ": bad weight '" + fields[2] + "'");
        auto b = static_cast<std::size_t>(*bin);
        if (b >= t.bins.size()) t.bins.resize(b + 1);
        t.bins[b].entries.push_back({static_cast<FeatureId>(*id), *w});
    }
    // Rows may arrive in any order; the in-memory invariant is sorted ids.
    for (auto& bin : t.bins)
        std::sort(bin.entries.begin(), bin.entries.end(),
                  [](const SparseEntry& a, const SparseEntry& b) { return a.id < b.id; });

    if (std::filesystem::exists(dir / "labels.txt")) t.bin_labels = read_lines(dir / "labels.txt");
    return t;
}

}  // namespace lvs
