#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace lvs {

// Streaming RFC 4180 reader: comma-separated, optionally quoted fields with
// doubled quotes, LF or CRLF record separators, newlines allowed inside
// quoted fields. A UTF-8 BOM at the start of the file is skipped.
//
// Malformed input (stray quote inside an unquoted field, text after a
// closing quote, EOF inside a quoted field) raises DataError naming the
// record and field position.
class CsvReader {
public:
    explicit CsvReader(const std::filesystem::path& path);

    // Reads one record into `fields`, reusing its storage.
    // Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    // 1-based index of the record last returned by next().
    std::size_t record_number() const { return record_; }

private:
    int get();
    int peek();
    [[noreturn]] void fail(std::size_t field, const std::string& what) const;

    std::ifstream in_;
    std::string path_;
    std::vector<char> buf_;
    std::size_t pos_ = 0;
    std::size_t end_ = 0;
    std::size_t record_ = 0;
};

// Quotes a field iff it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace lvs
