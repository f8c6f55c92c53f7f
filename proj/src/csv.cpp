#include "lvs/csv.hpp"

#include "lvs/error.hpp"

namespace lvs {

namespace {
constexpr std::size_t kBufSize = 1 << 16;
}

CsvReader::CsvReader(const std::filesystem::path& path)
    : in_(path, std::ios::binary), path_(path.string()), buf_(kBufSize) {
    if (!in_) throw DataError("cannot open '" + path_ + "'");
    in_.read(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    end_ = static_cast<std::size_t>(in_.gcount());
    if (end_ >= 3 && buf_[0] == '\xEF' && buf_[1] == '\xBB' && buf_[2] == '\xBF') pos_ = 3;
}

int CsvReader::get() {
    if (pos_ == end_) {
        in_.read(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        end_ = static_cast<std::size_t>(in_.gcount());
        pos_ = 0;
        if (end_ == 0) return -1;
    }
    return static_cast<unsigned char>(buf_[pos_++]);
}

int CsvReader::peek() {
    if (pos_ == end_) {
        in_.read(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        end_ = static_cast<std::size_t>(in_.gcount());
        pos_ = 0;
        if (end_ == 0) return -1;
    }
    return static_cast<unsigned char>(buf_[pos_]);
}

void CsvReader::fail(std::size_t field, const std::string& what) const {
    throw DataError("'" + path_ + "': record " + std::to_string(record_ + 1) + ", field " +
                    std::to_string(field + 1) + ": " + what);
}

bool CsvReader::next(std::vector<std::string>& fields) {
    if (peek() < 0) return false;
    fields.clear();
    fields.emplace_back();
    bool quoted = false;       // inside an open quoted field
    bool was_quoted = false;   // current field started with a quote and closed it
    for (;;) {
        int c = get();
        if (quoted) {
            if (c < 0) fail(fields.size() - 1, "unterminated quoted field");
            if (c == '"') {
                if (peek() == '"') {
                    get();
                    fields.back().push_back('"');
                } else {
                    quoted = false;
                    was_quoted = true;
                }
            } else {
                fields.back().push_back(static_cast<char>(c));
            }
            continue;
        }
        if (c < 0 || c == '\n' || (c == '\r' && peek() == '\n')) {
            if (c == '\r') get();
            ++record_;
            return true;
        }
        if (c == ',') {
            fields.emplace_back();
            was_quoted = false;
            continue;
        }
        if (c == '"') {
            if (!fields.back().empty() || was_quoted)
                fail(fields.size() - 1, "quote inside unquoted field");
            quoted = true;
            continue;
        }
        if (was_quoted) fail(fields.size() - 1, "content after closing quote");
        fields.back().push_back(static_cast<char>(c));
    }
}

std::string csv_escape(std::string_view field) {
    bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << csv_escape(fields[i]);
    }
    out.put('\n');
}

}  // namespace lvs
