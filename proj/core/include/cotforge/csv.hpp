#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace cotforge {

// Shortest round-trip decimal rendering; '.' decimal point, no locale.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Minimal CSV assembly with deterministic bytes for a given value sequence.
class CsvWriter {
public:
    explicit CsvWriter(std::string header) : body_(std::move(header)) { body_.push_back('\n'); }

    CsvWriter& cell(const std::string& s) {
        sep();
        body_ += s;
        return *this;
    }
    CsvWriter& cell(double v) { return cell(format_double(v)); }
    CsvWriter& cell(long long v) { return cell(std::to_string(v)); }
    CsvWriter& cell(int v) { return cell(std::to_string(v)); }
    CsvWriter& cell(std::uint64_t v) { return cell(std::to_string(v)); }

    void end_row() {
        body_.push_back('\n');
        row_open_ = false;
    }

    const std::string& str() const { return body_; }

private:
    void sep() {
        if (row_open_) body_.push_back(',');
        row_open_ = true;
    }
    std::string body_;
    bool row_open_ = false;
};

}  // namespace cotforge
