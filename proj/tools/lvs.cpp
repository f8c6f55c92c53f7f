// Batch front end: ingest -> transform -> analysis, one subcommand per
// pipeline stage so the intermediate artifacts stay inspectable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lvs/analysis.hpp"
#include "lvs/csv.hpp"
#include "lvs/error.hpp"
#include "lvs/ingest.hpp"
#include "lvs/manifest.hpp"
#include "lvs/num.hpp"
#include "lvs/timeline.hpp"
#include "lvs/transform.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommandRun {
    std::string name;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::uint64_t seed = 0;
};

std::ofstream open_out(const fs::path& path) {
    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw lvs::DataError("cannot write " + path.string());
    return out;
}

lvs::Timeline load_validated_timeline(const fs::path& dir) {
    lvs::Timeline t = lvs::read_timeline(dir);
    auto violations = lvs::validate_timeline(t);
    if (!violations.empty()) {
        std::string msg = "timeline '" + dir.string() + "' is invalid: " +
                          lvs::describe(violations.front());
        if (violations.size() > 1)
            msg += " (+" + std::to_string(violations.size() - 1) + " more)";
        throw lvs::DataError(msg);
    }
    return t;
}

// Threshold selection shared by the transforming commands.
struct PolicyFlags {
    std::optional<double> theta;
    std::optional<double> quantile;

    lvs::ThresholdPolicy policy() const {
        if (quantile) return lvs::ThresholdPolicy::quantile(*quantile);
        return lvs::ThresholdPolicy::fixed(theta.value_or(0.0));
    }
    void describe(CommandRun& run) const {
        if (quantile) {
            run.config.emplace_back("mode", "quantile");
            run.config.emplace_back("quantile", lvs::format_g17(*quantile));
        } else {
            run.config.emplace_back("mode", "fixed");
            run.config.emplace_back("theta", lvs::format_g17(theta.value_or(0.0)));
        }
    }
};

void add_policy_flags(CLI::App* cmd, PolicyFlags& flags) {
    auto* theta = cmd->add_option("--theta", flags.theta,
                                  "Keep surprisal entries with |value| > theta (bits)");
    auto* quantile =
        cmd->add_option("--quantile", flags.quantile,
                        "Keep entries above this per-bin quantile of |value|, in (0,1)");
    theta->excludes(quantile);
    quantile->excludes(theta);
}

std::vector<std::pair<long long, int>> read_labels_csv(const fs::path& path) {
    lvs::CsvReader reader(path);
    std::vector<std::string> fields;
    std::vector<std::pair<long long, int>> out;
    bool first = true;
    while (reader.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() < 2)
            throw lvs::DataError("'" + path.string() + "' record " +
                                 std::to_string(reader.record_number()) +
                                 ": expected bin_index,label");
        if (first && !lvs::parse_int(fields[0])) {
            first = false;  // header row
            continue;
        }
        first = false;
        auto bin = lvs::parse_int(fields[0]);
        auto label = lvs::parse_int(fields[1]);
        if (!bin || *bin < 0 || !label || (*label != 0 && *label != 1))
            throw lvs::DataError("'" + path.string() + "' record " +
                                 std::to_string(reader.record_number()) +
                                 ": labels must be (bin_index, 0|1)");
        out.emplace_back(*bin, static_cast<int>(*label));
    }
    if (out.empty()) throw lvs::DataError("'" + path.string() + "' holds no labels");
    return out;
}

// Aligns (bin_index, label) pairs to bins 0..n-1, requiring exact coverage.
std::vector<int> align_labels(const std::vector<std::pair<long long, int>>& pairs,
                              std::size_t n, const std::string& source) {
    std::vector<int> labels(n, -1);
    for (const auto& [bin, label] : pairs) {
        if (bin >= static_cast<long long>(n))
            throw lvs::DataError(source + ": label for bin " + std::to_string(bin) +
                                 " but only " + std::to_string(n) + " bins exist");
        if (labels[static_cast<std::size_t>(bin)] != -1)
            throw lvs::DataError(source + ": duplicate label for bin " + std::to_string(bin));
        labels[static_cast<std::size_t>(bin)] = label;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (labels[i] == -1)
            throw lvs::DataError(source + ": no label for bin " + std::to_string(i));
    return labels;
}

struct ScoreRow {
    long long bin = 0;
    double score = 0.0;
};

// Accepts this tool's divergence.csv, an external scores.csv with a header,
// or a headerless two-column (bin_index, score) file.
std::vector<ScoreRow> read_scores_csv(const fs::path& path) {
    lvs::CsvReader reader(path);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw lvs::DataError("'" + path.string() + "' is empty");

    std::size_t bin_col = 0, score_col = fields.size() - 1;
    std::vector<ScoreRow> rows;
    const bool headerless = lvs::parse_int(fields[0]).has_value();
    if (headerless) {
        if (fields.size() != 2)
            throw lvs::DataError("'" + path.string() +
                                 "': headerless score files need exactly bin_index,score");
        score_col = 1;
        auto bin = lvs::parse_int(fields[0]);
        auto score = lvs::parse_double(fields[1]);
        if (!bin || !score) throw lvs::DataError("'" + path.string() + "' record 1: bad row");
        rows.push_back({*bin, *score});
    } else {
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (fields[c] == "bin_index") bin_col = c;
            if (fields[c] == "divergence" || fields[c] == "score") score_col = c;
        }
    }
    while (reader.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        const std::string where =
            "'" + path.string() + "' record " + std::to_string(reader.record_number());
        if (fields.size() <= std::max(bin_col, score_col))
            throw lvs::DataError(where + ": too few fields");
        auto bin = lvs::parse_int(fields[bin_col]);
        auto score = lvs::parse_double(fields[score_col]);
        if (!bin || *bin < 0) throw lvs::DataError(where + ": bad bin_index");
        if (!score) throw lvs::DataError(where + ": bad score");
        rows.push_back({*bin, *score});
    }
    if (rows.empty()) throw lvs::DataError("'" + path.string() + "' holds no scores");
    return rows;
}

void write_tcr_csv(const lvs::Timeline& t, const lvs::TimelineCenter& tcr, const fs::path& path) {
    // Rows in decreasing prominence so the head of the file is the
    // timeline's expected vocabulary.
    std::vector<lvs::FeatureId> order(tcr.values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<lvs::FeatureId>(i);
    std::stable_sort(order.begin(), order.end(), [&tcr](lvs::FeatureId a, lvs::FeatureId b) {
        if (tcr.values[a] != tcr.values[b]) return tcr.values[a] > tcr.values[b];
        return a < b;
    });
    auto out = open_out(path);
    out << "feature,value\n";
    for (auto id : order)
        lvs::write_csv_row(out, {t.vocabulary.name(id), lvs::format_g17(tcr.values[id])});
}

void write_sp_csv(const lvs::Timeline& t, const std::vector<lvs::SurprisabilityProfile>& sps,
                  const fs::path& path) {
    auto out = open_out(path);
    out << "bin_index,feature_name,signed_surprisal\n";
    std::vector<lvs::SparseEntry> row;
    for (const auto& sp : sps) {
        row.assign(sp.signed_values.begin(), sp.signed_values.end());
        std::sort(row.begin(), row.end(), [](const lvs::SparseEntry& a, const lvs::SparseEntry& b) {
            const double ma = std::abs(a.value), mb = std::abs(b.value);
            if (ma != mb) return ma > mb;
            return a.id < b.id;
        });
        for (const auto& e : row) {
            out << sp.bin_index << ',';
            out << lvs::csv_escape(t.vocabulary.name(e.id)) << ',';
            out << lvs::format_g17(e.value) << '\n';
        }
    }
}

void write_divergence_csv(const lvs::Timeline& t, const std::vector<double>& divergences,
                          const fs::path& path) {
    auto out = open_out(path);
    out << "bin_index,label,divergence\n";
    for (std::size_t i = 0; i < divergences.size(); ++i) {
        out << i << ',' << lvs::csv_escape(t.label_of(i)) << ','
            << lvs::format_g17(divergences[i]) << '\n';
    }
}

ordered_json report_json(const lvs::EvaluationReport& r) {
    ordered_json j;
    j["tp"] = r.tp;
    j["fp"] = r.fp;
    j["tn"] = r.tn;
    j["fn"] = r.fn;
    j["precision"] = r.precision;
    j["recall"] = r.recall;
    j["f1"] = r.f1;
    j["accuracy"] = r.accuracy;
    if (r.auc)
        j["auc"] = *r.auc;
    else
        j["auc"] = nullptr;
    j["threshold"] = r.threshold;
    return j;
}

void write_matrix(const lvs::DistanceMatrix& m, const fs::path& dir, const std::string& stem,
                  const std::string& format, CommandRun& run) {
    if (format == "json") {
        ordered_json j;
        j["labels"] = m.labels;
        j["normalized"] = m.normalized;
        auto values = ordered_json::array();
        for (std::size_t i = 0; i < m.n; ++i) {
            auto row = ordered_json::array();
            for (std::size_t k = 0; k < m.n; ++k) row.push_back(m.at(i, k));
            values.push_back(std::move(row));
        }
        j["values"] = std::move(values);
        const fs::path path = dir / (stem + ".json");
        open_out(path) << j.dump(2) << '\n';
        run.outputs.push_back(path.string());
        return;
    }
    const fs::path path = dir / (stem + ".csv");
    auto out = open_out(path);
    std::vector<std::string> fields;
    fields.emplace_back();
    for (const auto& l : m.labels) fields.push_back(l);
    lvs::write_csv_row(out, fields);
    for (std::size_t i = 0; i < m.n; ++i) {
        fields.clear();
        fields.push_back(m.labels[i]);
        for (std::size_t k = 0; k < m.n; ++k) fields.push_back(lvs::format_g17(m.at(i, k)));
        lvs::write_csv_row(out, fields);
    }
    run.outputs.push_back(path.string());
}

void finish(CommandRun& run, const fs::path& outdir,
            std::chrono::steady_clock::time_point started) {
    lvs::RunManifest m;
    m.command = run.name;
    m.config_hash = lvs::config_digest(run.config);
    m.inputs = run.inputs;
    m.outputs = run.outputs;
    m.seed = run.seed;
    m.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_manifest(m, outdir);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Timeline surprisability toolkit"};
    app.set_version_flag("--version", std::string("lvs ") + std::string(lvs::kToolVersion));
    app.require_subcommand(1);

    // ---- ingest ----------------------------------------------------------
    std::string in_path, out_path, kind;
    std::string normalize = "minmax_then_rowsum";
    std::string stopwords, label_column, bin_label_column, denominator;
    auto* ingest = app.add_subcommand("ingest", "Convert a raw source into a timeline directory");
    ingest->add_option("input", in_path, "Source CSV, corpus directory, or JSON-lines file")
        ->required();
    ingest->add_option("outdir", out_path, "Timeline directory to create")->required();
    ingest->add_option("--kind", kind, "Source kind")
        ->required()
        ->check(CLI::IsMember({"numeric_table", "count_table", "text_corpus"}));
    ingest->add_option("--normalize", normalize, "Numeric-table normalization")
        ->check(CLI::IsMember({"rowsum", "minmax_then_rowsum"}));
    ingest->add_option("--stopwords", stopwords, "Stopword file, one token per line");
    ingest->add_option("--label-column", label_column, "Binary label column to extract");
    ingest->add_option("--bin-label-column", bin_label_column, "Display-label column");
    ingest->add_option("--denominator", denominator, "Denominator column for count tables");

    // ---- transform -------------------------------------------------------
    std::string tl_dir;
    PolicyFlags policy_flags;
    unsigned threads = 1;
    auto* transform =
        app.add_subcommand("transform", "Write center, profiles, and divergences");
    transform->add_option("timeline", tl_dir, "Timeline directory")->required();
    transform->add_option("outdir", out_path, "Output directory")->required();
    add_policy_flags(transform, policy_flags);
    transform->add_option("--threads", threads, "Worker cap")->check(CLI::Range(1u, 1024u));

    // ---- evaluate --------------------------------------------------------
    std::string scores_path, labels_path, format = "csv";
    std::optional<double> fixed_threshold;
    std::vector<double> offsets{-0.10, -0.05, 0.0, 0.05, 0.10};
    auto* evaluate = app.add_subcommand(
        "evaluate", "Score a labeled timeline: report.json and sensitivity table");
    evaluate->add_option("scores", scores_path, "divergence.csv or external scores.csv")
        ->required();
    evaluate->add_option("outdir", out_path, "Output directory")->required();
    evaluate->add_option("--labels", labels_path, "CSV of bin_index,label in {0,1}")->required();
    evaluate->add_option("--threshold", fixed_threshold,
                         "Divergence cutoff; defaults to the break-even threshold");
    evaluate->add_option("--offsets", offsets, "Multiplicative offsets for the sensitivity table")
        ->delimiter(',');
    evaluate->add_option("--format", format, "Sensitivity table format")
        ->check(CLI::IsMember({"csv", "json"}));

    // ---- rank ------------------------------------------------------------
    auto* rank = app.add_subcommand("rank", "Rank features by accumulated divergence");
    rank->add_option("timeline", tl_dir, "Timeline directory")->required();
    rank->add_option("outdir", out_path, "Output directory")->required();
    rank->add_option("--threads", threads, "Worker cap")->check(CLI::Range(1u, 1024u));
    rank->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    // ---- distances -------------------------------------------------------
    std::string on = "bins";
    bool normalized = false;
    auto* distances = app.add_subcommand("distances", "Pairwise L1 distance matrix across bins");
    distances->add_option("timeline", tl_dir, "Timeline directory")->required();
    distances->add_option("outdir", out_path, "Output directory")->required();
    distances->add_option("--on", on, "Compare raw bins or surprisability profiles")
        ->check(CLI::IsMember({"bins", "sp"}));
    add_policy_flags(distances, policy_flags);
    distances->add_flag("--normalized", normalized, "Divide all entries by the matrix maximum");
    distances->add_option("--threads", threads, "Worker cap")->check(CLI::Range(1u, 1024u));
    distances->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // ---- trajectory ------------------------------------------------------
    std::string feature;
    auto* trajectory =
        app.add_subcommand("trajectory", "Per-bin surprisal and frequency of one feature");
    trajectory->add_option("timeline", tl_dir, "Timeline directory")->required();
    trajectory->add_option("outdir", out_path, "Output directory")->required();
    trajectory->add_option("--feature", feature, "Feature name")->required();
    trajectory->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // ---- cluster ---------------------------------------------------------
    std::size_t k_clusters = 2, pca_dims = 2;
    std::uint64_t seed = 0;
    auto* cluster = app.add_subcommand(
        "cluster", "Scale profiles, project with PCA, and run k-means over the bins");
    cluster->add_option("timeline", tl_dir, "Timeline directory")->required();
    cluster->add_option("outdir", out_path, "Output directory")->required();
    cluster->add_option("--k", k_clusters, "Cluster count")->required();
    cluster->add_option("--pca-dims", pca_dims, "Retained principal components");
    cluster->add_option("--seed", seed, "Seed for k-means++ initialization");
    add_policy_flags(cluster, policy_flags);
    cluster->add_option("--labels", labels_path, "Optional bin_index,label CSV for a report");
    cluster->add_option("--threads", threads, "Worker cap")->check(CLI::Range(1u, 1024u));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e);
        std::cerr << "error: usage: " << e.what() << '\n';
        return 2;
    }

    const auto started = std::chrono::steady_clock::now();
    try {
        const fs::path outdir(out_path);
        CommandRun run;

        if (*ingest) {
            run.name = "ingest";
            run.inputs.push_back(in_path);
            run.config = {{"kind", kind}, {"normalize", normalize}};
            lvs::IngestConfig config;
            config.normalization = normalize == "rowsum" ? lvs::Normalization::rowsum
                                                         : lvs::Normalization::minmax_then_rowsum;
            if (!stopwords.empty()) {
                config.stopword_path = stopwords;
                run.config.emplace_back("stopwords", stopwords);
                run.inputs.push_back(stopwords);
            }
            if (!label_column.empty()) {
                config.label_column = label_column;
                run.config.emplace_back("label_column", label_column);
            }
            if (!bin_label_column.empty()) {
                config.bin_label_column = bin_label_column;
                run.config.emplace_back("bin_label_column", bin_label_column);
            }
            if (!denominator.empty()) {
                config.denominator_column = denominator;
                run.config.emplace_back("denominator", denominator);
            }
            lvs::IngestResult result;
            if (kind == "numeric_table") {
                config.kind = lvs::SourceKind::numeric_table;
                result = lvs::ingest_numeric_table(in_path, config);
            } else if (kind == "count_table") {
                config.kind = lvs::SourceKind::count_table;
                result = lvs::ingest_count_table(in_path, config);
            } else {
                config.kind = lvs::SourceKind::text_corpus;
                result = lvs::ingest_text_corpus(in_path, config);
            }
            for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
            lvs::write_timeline(result.timeline, outdir);
            run.outputs.push_back((outdir / "vocab.txt").string());
            run.outputs.push_back((outdir / "bins.csv").string());
            if (!result.timeline.bin_labels.empty())
                run.outputs.push_back((outdir / "labels.txt").string());
            if (!result.binary_labels.empty()) {
                auto out = open_out(outdir / "labels.csv");
                out << "bin_index,label\n";
                for (std::size_t i = 0; i < result.binary_labels.size(); ++i)
                    out << i << ',' << result.binary_labels[i] << '\n';
                run.outputs.push_back((outdir / "labels.csv").string());
            }
        } else if (*transform) {
            run.name = "transform";
            run.inputs.push_back(tl_dir);
            policy_flags.describe(run);
            run.config.emplace_back("threads", std::to_string(threads));
            lvs::Timeline t = load_validated_timeline(tl_dir);
            auto result = lvs::transform_timeline(t, policy_flags.policy(), threads);
            write_tcr_csv(t, result.tcr, outdir / "tcr.csv");
            write_sp_csv(t, result.profiles, outdir / "sp.csv");
            write_divergence_csv(t, result.divergences, outdir / "divergence.csv");
            run.outputs = {(outdir / "tcr.csv").string(), (outdir / "sp.csv").string(),
                           (outdir / "divergence.csv").string()};
        } else if (*evaluate) {
            run.name = "evaluate";
            run.inputs = {scores_path, labels_path};
            auto rows = read_scores_csv(scores_path);
            auto label_pairs = read_labels_csv(labels_path);

            std::vector<lvs::ScoredBin> scored;
            {
                std::unordered_map<long long, int> by_bin;
                for (const auto& [bin, label] : label_pairs)
                    if (!by_bin.emplace(bin, label).second)
                        throw lvs::DataError("duplicate label for bin " + std::to_string(bin));
                if (by_bin.size() != rows.size())
                    throw lvs::DataError("have " + std::to_string(by_bin.size()) +
                                         " labels for " + std::to_string(rows.size()) + " scores");
                std::unordered_set<long long> seen;
                for (const auto& row : rows)
                    if (!seen.insert(row.bin).second)
                        throw lvs::DataError("duplicate score for bin " + std::to_string(row.bin));
                for (const auto& row : rows) {
                    auto it = by_bin.find(row.bin);
                    if (it == by_bin.end())
                        throw lvs::DataError("no label for bin " + std::to_string(row.bin));
                    lvs::ScoredBin s;
                    s.bin_index = static_cast<std::size_t>(row.bin);
                    s.score = row.score;
                    s.label = it->second;
                    scored.push_back(s);
                }
            }
            bool has_pos = false, has_neg = false;
            for (const auto& s : scored) (*s.label ? has_pos : has_neg) = true;
            if (!has_pos || !has_neg)
                throw lvs::DataError("AUC undefined: labels contain a single class");

            const double threshold =
                fixed_threshold ? *fixed_threshold : lvs::break_even_threshold(scored);
            run.config.emplace_back("threshold", fixed_threshold
                                                     ? lvs::format_g17(*fixed_threshold)
                                                     : std::string("break_even"));
            std::string offsets_str;
            for (double o : offsets)
                offsets_str += (offsets_str.empty() ? "" : ",") + lvs::format_g17(o);
            run.config.emplace_back("offsets", offsets_str);
            run.config.emplace_back("format", format);

            auto report = lvs::evaluate(scored, threshold);
            open_out(outdir / "report.json") << report_json(report).dump(2) << '\n';
            run.outputs.push_back((outdir / "report.json").string());

            auto table = lvs::threshold_sensitivity(scored, threshold, offsets);
            if (format == "json") {
                auto arr = ordered_json::array();
                for (std::size_t i = 0; i < table.size(); ++i) {
                    auto j = report_json(table[i]);
                    j["offset"] = offsets[i];
                    arr.push_back(std::move(j));
                }
                open_out(outdir / "sensitivity.json") << arr.dump(2) << '\n';
                run.outputs.push_back((outdir / "sensitivity.json").string());
            } else {
                auto out = open_out(outdir / "sensitivity.csv");
                out << "offset,threshold,auc,f1,precision,recall,accuracy,tp,fp,tn,fn\n";
                for (std::size_t i = 0; i < table.size(); ++i) {
                    const auto& r = table[i];
                    out << lvs::format_g17(offsets[i]) << ',' << lvs::format_g17(r.threshold)
                        << ',' << (r.auc ? lvs::format_g17(*r.auc) : std::string()) << ','
                        << lvs::format_g17(r.f1) << ',' << lvs::format_g17(r.precision) << ','
                        << lvs::format_g17(r.recall) << ',' << lvs::format_g17(r.accuracy) << ','
                        << r.tp << ',' << r.fp << ',' << r.tn << ',' << r.fn << '\n';
                }
                run.outputs.push_back((outdir / "sensitivity.csv").string());
            }
        } else if (*rank) {
            run.name = "rank";
            run.inputs.push_back(tl_dir);
            run.config.emplace_back("format", format);
            lvs::Timeline t = load_validated_timeline(tl_dir);
            auto result = lvs::transform_timeline(t, lvs::ThresholdPolicy::none(), threads);
            auto ranking = lvs::variability_ranking(result.profiles);
            if (format == "json") {
                auto arr = ordered_json::array();
                for (std::size_t i = 0; i < ranking.entries.size(); ++i)
                    arr.push_back({{"rank", i + 1},
                                   {"feature", t.vocabulary.name(ranking.entries[i].id)},
                                   {"d_js", ranking.entries[i].value}});
                open_out(outdir / "ranking.json") << arr.dump(2) << '\n';
                run.outputs.push_back((outdir / "ranking.json").string());
            } else {
                auto out = open_out(outdir / "ranking.csv");
                out << "rank,feature,d_js\n";
                for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
                    out << (i + 1) << ','
                        << lvs::csv_escape(t.vocabulary.name(ranking.entries[i].id)) << ','
                        << lvs::format_g17(ranking.entries[i].value) << '\n';
                }
                run.outputs.push_back((outdir / "ranking.csv").string());
            }
        } else if (*distances) {
            run.name = "distances";
            run.inputs.push_back(tl_dir);
            run.config.emplace_back("on", on);
            run.config.emplace_back("normalized", normalized ? "true" : "false");
            run.config.emplace_back("format", format);
            lvs::Timeline t = load_validated_timeline(tl_dir);
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < t.bins.size(); ++i) labels.push_back(t.label_of(i));

            std::vector<std::span<const lvs::SparseEntry>> views;
            lvs::TransformResult result;
            if (on == "sp") {
                policy_flags.describe(run);
                result = lvs::transform_timeline(t, policy_flags.policy(), threads);
                for (const auto& sp : result.profiles) views.emplace_back(sp.signed_values);
            } else {
                for (const auto& bin : t.bins) views.emplace_back(bin.entries);
            }
            auto matrix = lvs::distance_matrix(views, normalized, std::move(labels));
            write_matrix(matrix, outdir, "matrix", format, run);
        } else if (*trajectory) {
            run.name = "trajectory";
            run.inputs.push_back(tl_dir);
            run.config.emplace_back("feature", feature);
            run.config.emplace_back("format", format);
            lvs::Timeline t = load_validated_timeline(tl_dir);
            auto tcr = lvs::build_tcr(t);
            auto series = lvs::feature_trajectory(t, tcr, feature);
            if (format == "json") {
                auto arr = ordered_json::array();
                for (std::size_t i = 0; i < series.size(); ++i)
                    arr.push_back({{"bin_label", t.label_of(i)},
                                   {"surprisal", series[i].surprisal},
                                   {"frequency", series[i].frequency}});
                open_out(outdir / "trajectory.json") << arr.dump(2) << '\n';
                run.outputs.push_back((outdir / "trajectory.json").string());
            } else {
                auto out = open_out(outdir / "trajectory.csv");
                out << "bin_label,surprisal,frequency\n";
                for (std::size_t i = 0; i < series.size(); ++i) {
                    lvs::write_csv_row(out, {t.label_of(i), lvs::format_g17(series[i].surprisal),
                                             lvs::format_g17(series[i].frequency)});
                }
                run.outputs.push_back((outdir / "trajectory.csv").string());
            }
        } else if (*cluster) {
            run.name = "cluster";
            run.inputs.push_back(tl_dir);
            run.seed = seed;
            policy_flags.describe(run);
            run.config.emplace_back("k", std::to_string(k_clusters));
            run.config.emplace_back("pca_dims", std::to_string(pca_dims));
            run.config.emplace_back("seed", std::to_string(seed));
            lvs::Timeline t = load_validated_timeline(tl_dir);
            auto result = lvs::transform_timeline(t, policy_flags.policy(), threads);
            auto scaled = lvs::scale_for_clustering(result.profiles, t.vocabulary.size());
            auto pca = lvs::pca_project(scaled, pca_dims);
            auto km = lvs::kmeans_cluster(pca.projected, k_clusters, seed);

            auto out = open_out(outdir / "clusters.csv");
            out << "bin_index,cluster\n";
            for (std::size_t i = 0; i < km.assignments.size(); ++i)
                out << i << ',' << km.assignments[i] << '\n';
            run.outputs.push_back((outdir / "clusters.csv").string());

            if (!labels_path.empty()) {
                run.inputs.push_back(labels_path);
                auto labels =
                    align_labels(read_labels_csv(labels_path), t.bins.size(), labels_path);
                auto ev = lvs::cluster_vs_labels(km.assignments, labels);
                ordered_json j;
                j["labels"] = ev.label_values;
                j["clusters"] = ev.cluster_ids;
                j["counts"] = ev.counts;
                auto per = ordered_json::array();
                for (const auto& st : ev.clusters)
                    per.push_back({{"cluster", st.cluster},
                                   {"mapped_label", st.mapped_label},
                                   {"size", st.size},
                                   {"correct", st.correct},
                                   {"precision", st.precision},
                                   {"recall", st.recall},
                                   {"f1", st.f1}});
                j["per_cluster"] = std::move(per);
                j["overall_f1"] = ev.overall_f1;
                j["explained_variance"] = pca.explained;
                open_out(outdir / "cluster_report.json") << j.dump(2) << '\n';
                run.outputs.push_back((outdir / "cluster_report.json").string());
            }
        }

        finish(run, outdir, started);
        return 0;
    } catch (const lvs::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 1;
    }
}
