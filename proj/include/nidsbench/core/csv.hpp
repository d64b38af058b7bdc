#pragma once
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "error.hpp"

namespace nidsbench::csv {

// Streaming RFC-4180 reader: quoted fields, doubled quotes, embedded line
// breaks inside quotes, CRLF or LF record terminators.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Reads the next record into `fields`. Returns false at end of input.
    bool next(std::vector<std::string>& fields) {
        fields.clear();
        if (in_.peek() == std::char_traits<char>::eof()) return false;
        std::string field;
        bool quoted = false;
        bool after_quote = false;
        for (;;) {
            const int c = in_.get();
            if (c == std::char_traits<char>::eof()) {
                if (quoted) throw DataError("csv: unterminated quoted field at record " + std::to_string(record_ + 1));
                fields.push_back(std::move(field));
                break;
            }
            const char ch = static_cast<char>(c);
            if (quoted) {
                if (ch == '"') {
                    if (in_.peek() == '"') {
                        in_.get();
                        field.push_back('"');
                    } else {
                        quoted = false;
                        after_quote = true;
                    }
                } else {
                    field.push_back(ch);
                }
                continue;
            }
            if (ch == ',') {
                fields.push_back(std::move(field));
                field.clear();
                after_quote = false;
            } else if (ch == '\n' || ch == '\r') {
                if (ch == '\r' && in_.peek() == '\n') in_.get();
                fields.push_back(std::move(field));
                break;
            } else if (ch == '"' && field.empty() && !after_quote) {
                quoted = true;
            } else {
                field.push_back(ch);
            }
        }
        ++record_;
        return true;
    }

    std::size_t records_read() const { return record_; }

private:
    std::istream& in_;
    std::size_t record_ = 0;
};

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

// Parses a decimal real. Returns nullopt for empty or malformed cells.
// Non-finite spellings ("inf", "Infinity", "NaN") parse to non-finite values.
inline std::optional<double> parse_real(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc::result_out_of_range) return s.front() == '-' ? -HUGE_VAL : HUGE_VAL;
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// Shortest representation that parses back to the same double.
inline std::string format_real(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string quote_if_needed(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline void write_record(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << quote_if_needed(fields[i]);
    }
    out << '\n';
}

} // namespace nidsbench::csv
