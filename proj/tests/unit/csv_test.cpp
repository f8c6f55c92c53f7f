#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "lvs/csv.hpp"
#include "lvs/error.hpp"

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

std::vector<std::vector<std::string>> read_all(const std::filesystem::path& path) {
    lvs::CsvReader reader(path);
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    while (reader.next(fields)) records.push_back(fields);
    return records;
}

}  // namespace

TEST_CASE("csv reader handles quoting, CRLF, and embedded separators") {
    auto path = write_temp("lvs_csv_basic.csv",
                           "a,b,c\r\n"
                           "1,\"two, with comma\",3\n"
                           "\"multi\nline\",\"he said \"\"hi\"\"\",\n");
    auto rows = read_all(path);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"a", "b", "c"});
    CHECK(rows[1] == std::vector<std::string>{"1", "two, with comma", "3"});
    CHECK(rows[2] == std::vector<std::string>{"multi\nline", "he said \"hi\"", ""});
    std::filesystem::remove(path);
}

TEST_CASE("csv reader skips a UTF-8 BOM") {
    auto path = write_temp("lvs_csv_bom.csv", "\xEF\xBB\xBFx,y\n1,2\n");
    auto rows = read_all(path);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] == "x");
    std::filesystem::remove(path);
}

TEST_CASE("csv reader rejects malformed quoting") {
    auto stray = write_temp("lvs_csv_stray.csv", "a,b\"c\n");
    CHECK_THROWS_AS(read_all(stray), lvs::DataError);
    auto unterminated = write_temp("lvs_csv_open.csv", "a,\"b\n");
    CHECK_THROWS_AS(read_all(unterminated), lvs::DataError);
    auto trailing = write_temp("lvs_csv_trail.csv", "\"a\"b,c\n");
    CHECK_THROWS_AS(read_all(trailing), lvs::DataError);
    std::filesystem::remove(stray);
    std::filesystem::remove(unterminated);
    std::filesystem::remove(trailing);
}

TEST_CASE("escape and re-read round-trips awkward fields") {
    std::vector<std::string> fields{"plain", "with,comma", "with \"quotes\"", "multi\nline", ""};
    auto path = std::filesystem::temp_directory_path() / "lvs_csv_roundtrip.csv";
    {
        std::ofstream out(path, std::ios::binary);
        lvs::write_csv_row(out, fields);
    }
    auto rows = read_all(path);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == fields);
    std::filesystem::remove(path);
}
