#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "lvs/error.hpp"
#include "lvs/ingest.hpp"
#include "lvs/timeline.hpp"

using namespace lvs;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    auto path = fs::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

double bin_weight(const Timeline& t, std::size_t bin, const std::string& feature) {
    auto id = t.vocabulary.find(feature);
    REQUIRE(id.has_value());
    return t.bins[bin].weight(*id);
}

}  // namespace

TEST_CASE("ingest_numeric_table with min-max scaling") {
    auto csv = write_temp("lvs_numeric.csv", "x,y\n1,3\n3,1\n");
    IngestConfig config;
    config.kind = SourceKind::numeric_table;
    config.normalization = Normalization::minmax_then_rowsum;

    auto result = ingest_numeric_table(csv, config);
    REQUIRE(result.timeline.bins.size() == 2);
    CHECK(bin_weight(result.timeline, 0, "x") == 0.0);
    CHECK(bin_weight(result.timeline, 0, "y") == 1.0);
    CHECK(bin_weight(result.timeline, 1, "x") == 1.0);
    CHECK(bin_weight(result.timeline, 1, "y") == 0.0);
    CHECK(validate_timeline(result.timeline).empty());
    fs::remove(csv);
}

TEST_CASE("degenerate numeric columns are dropped; all-degenerate errors") {
    SUBCASE("one constant column warns and drops") {
        auto csv = write_temp("lvs_numeric_const.csv", "x,y\n1,5\n3,5\n");
        IngestConfig config;
        config.kind = SourceKind::numeric_table;
        auto result = ingest_numeric_table(csv, config);
        REQUIRE(result.warnings.size() == 1);
        CHECK(result.warnings[0].find("'y'") != std::string::npos);
        CHECK(result.timeline.vocabulary.size() == 1);
        fs::remove(csv);
    }
    SUBCASE("identical rows leave nothing to scale") {
        auto csv = write_temp("lvs_numeric_flat.csv", "x,y\n2,5\n2,5\n");
        IngestConfig config;
        config.kind = SourceKind::numeric_table;
        CHECK_THROWS_AS(ingest_numeric_table(csv, config), DataError);
        fs::remove(csv);
    }
}

TEST_CASE("ingest_numeric_table with rowsum normalization") {
    auto csv = write_temp("lvs_numeric_rowsum.csv", "x,y,z\n1,3,0\n2,2,0\n");
    IngestConfig config;
    config.kind = SourceKind::numeric_table;
    config.normalization = Normalization::rowsum;
    auto result = ingest_numeric_table(csv, config);
    CHECK(bin_weight(result.timeline, 0, "x") == doctest::Approx(0.25));
    CHECK(bin_weight(result.timeline, 0, "y") == doctest::Approx(0.75));
    CHECK(bin_weight(result.timeline, 1, "x") == doctest::Approx(0.5));
    // The all-zero column is dropped so the vocabulary only has live features.
    CHECK(!result.timeline.vocabulary.find("z").has_value());
    REQUIRE(result.warnings.size() == 1);
    fs::remove(csv);
}

TEST_CASE("numeric ingestion reports the bad cell") {
    auto csv = write_temp("lvs_numeric_bad.csv", "x,y\n1,2\n1,oops\n");
    IngestConfig config;
    config.kind = SourceKind::numeric_table;
    try {
        ingest_numeric_table(csv, config);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string what = e.what();
        CHECK(what.find("row 3") != std::string::npos);
        CHECK(what.find("'y'") != std::string::npos);
    }
    fs::remove(csv);
}

TEST_CASE("numeric ingestion extracts binary and display labels") {
    auto csv = write_temp("lvs_numeric_labels.csv",
                          "ts,x,y,Flag\n2015-01-01,1,4,Normal\n2015-01-02,3,2,Attack\n"
                          "2015-01-03,2,3,0\n");
    IngestConfig config;
    config.kind = SourceKind::numeric_table;
    config.label_column = "Flag";
    config.bin_label_column = "ts";
    auto result = ingest_numeric_table(csv, config);
    CHECK(result.binary_labels == std::vector<int>{0, 1, 0});
    CHECK(result.timeline.bin_labels ==
          std::vector<std::string>{"2015-01-01", "2015-01-02", "2015-01-03"});
    CHECK(result.timeline.vocabulary.size() == 2);
    fs::remove(csv);
}

TEST_CASE("ingest_count_table normalizes proportions to distributions") {
    SUBCASE("denominator column cancels after renormalization") {
        auto csv = write_temp("lvs_counts.csv", "year,population,a,b\n1990,100,10,30\n");
        IngestConfig config;
        config.kind = SourceKind::count_table;
        config.denominator_column = "population";
        config.bin_label_column = "year";
        auto result = ingest_count_table(csv, config);
        CHECK(bin_weight(result.timeline, 0, "a") == doctest::Approx(0.25));
        CHECK(bin_weight(result.timeline, 0, "b") == doctest::Approx(0.75));
        CHECK(result.timeline.bin_labels == std::vector<std::string>{"1990"});
        fs::remove(csv);
    }
    SUBCASE("single nonzero cause becomes a unit mass") {
        auto csv = write_temp("lvs_counts_unit.csv", "a,b\n0,7\n");
        IngestConfig config;
        config.kind = SourceKind::count_table;
        auto result = ingest_count_table(csv, config);
        CHECK(bin_weight(result.timeline, 0, "b") == 1.0);
        CHECK(result.timeline.bins[0].entries.size() == 1);
        fs::remove(csv);
    }
    SUBCASE("negative counts and bad denominators error") {
        auto neg = write_temp("lvs_counts_neg.csv", "a,b\n-1,2\n");
        IngestConfig config;
        config.kind = SourceKind::count_table;
        CHECK_THROWS_AS(ingest_count_table(neg, config), DataError);
        fs::remove(neg);

        auto zero = write_temp("lvs_counts_zero.csv", "pop,a\n0,2\n");
        config.denominator_column = "pop";
        CHECK_THROWS_AS(ingest_count_table(zero, config), DataError);
        fs::remove(zero);
    }
}

TEST_CASE("tokenize lowercases letter runs and keeps inner apostrophes") {
    // The em-dash splits, digits never join tokens, and a quoted 'n' loses
    // its outer apostrophes but keeps the inner one in o'neill's.
    auto tokens = tokenize("Don't stop\xE2\x80\x94the O'Neill's pi\xC3\xB1" "ata! 'n' 42");
    CHECK(tokens == std::vector<std::string>{"don't", "stop", "the", "o'neill's",
                                             "pi\xC3\xB1" "ata", "n"});
    // The curly apostrophe normalizes to the ASCII one.
    CHECK(tokenize("can\xE2\x80\x99t") == std::vector<std::string>{"can't"});
}

TEST_CASE("ingest_text_corpus counts terms per bin") {
    SUBCASE("stopwords are removed before counting") {
        auto dir = fs::temp_directory_path() / "lvs_corpus_basic";
        fs::create_directories(dir);
        {
            std::ofstream(dir / "1990.txt") << "The cat saw the cat";
        }
        auto stop = write_temp("lvs_stop.txt", "the\n");
        IngestConfig config;
        config.kind = SourceKind::text_corpus;
        config.stopword_path = stop.string();
        auto result = ingest_text_corpus(dir, config);
        REQUIRE(result.timeline.bins.size() == 1);
        CHECK(bin_weight(result.timeline, 0, "cat") == doctest::Approx(2.0 / 3.0));
        CHECK(bin_weight(result.timeline, 0, "saw") == doctest::Approx(1.0 / 3.0));
        CHECK(!result.timeline.vocabulary.find("the").has_value());
        fs::remove_all(dir);
        fs::remove(stop);
    }
    SUBCASE("single word with no stopwords is a unit mass") {
        auto dir = fs::temp_directory_path() / "lvs_corpus_unit";
        fs::create_directories(dir);
        {
            std::ofstream(dir / "a.txt") << "word";
        }
        IngestConfig config;
        config.kind = SourceKind::text_corpus;
        auto result = ingest_text_corpus(dir, config);
        CHECK(bin_weight(result.timeline, 0, "word") == 1.0);
        fs::remove_all(dir);
    }
    SUBCASE("a bin emptied by filtering errors") {
        auto dir = fs::temp_directory_path() / "lvs_corpus_empty";
        fs::create_directories(dir);
        {
            std::ofstream(dir / "a.txt") << "the the the";
        }
        auto stop = write_temp("lvs_stop2.txt", "the\n");
        IngestConfig config;
        config.kind = SourceKind::text_corpus;
        config.stopword_path = stop.string();
        CHECK_THROWS_AS(ingest_text_corpus(dir, config), DataError);
        fs::remove_all(dir);
        fs::remove(stop);
    }
    SUBCASE("directory bins are ordered by label") {
        auto dir = fs::temp_directory_path() / "lvs_corpus_order";
        fs::create_directories(dir);
        std::ofstream(dir / "1993.txt") << "later";
        std::ofstream(dir / "1991.txt") << "earlier";
        IngestConfig config;
        config.kind = SourceKind::text_corpus;
        auto result = ingest_text_corpus(dir, config);
        CHECK(result.timeline.bin_labels == std::vector<std::string>{"1991", "1993"});
        fs::remove_all(dir);
    }
    SUBCASE("json-lines documents sharing a label share a bin") {
        auto jsonl = write_temp("lvs_corpus.jsonl",
                                "{\"label\": 1990, \"text\": \"alpha beta\"}\n"
                                "{\"label\": 1991, \"text\": \"gamma\"}\n"
                                "{\"label\": 1990, \"text\": \"beta\"}\n");
        IngestConfig config;
        config.kind = SourceKind::text_corpus;
        auto result = ingest_text_corpus(jsonl, config);
        REQUIRE(result.timeline.bin_labels == std::vector<std::string>{"1990", "1991"});
        CHECK(bin_weight(result.timeline, 0, "beta") == doctest::Approx(2.0 / 3.0));
        fs::remove(jsonl);
    }
}

TEST_CASE("ingestion is deterministic and yields valid timelines") {
    auto csv = write_temp("lvs_numeric_det.csv", "x,y,z\n1,3,2\n3,1,9\n5,2,4\n");
    IngestConfig config;
    config.kind = SourceKind::numeric_table;
    auto first = ingest_numeric_table(csv, config);
    auto second = ingest_numeric_table(csv, config);
    CHECK(validate_timeline(first.timeline).empty());
    REQUIRE(first.timeline.bins.size() == second.timeline.bins.size());
    for (std::size_t b = 0; b < first.timeline.bins.size(); ++b)
        CHECK(first.timeline.bins[b].entries == second.timeline.bins[b].entries);

    // Vocabulary holds exactly the features with weight somewhere.
    std::vector<bool> seen(first.timeline.vocabulary.size(), false);
    for (const auto& bin : first.timeline.bins)
        for (const auto& e : bin.entries) seen[e.id] = true;
    for (bool s : seen) CHECK(s);
    fs::remove(csv);
}
