#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "core/error.hpp"

namespace proxsim {

/// Buffered CSV writer. Doubles are emitted via std::to_chars (shortest
/// round-trip form), which is locale-free and byte-stable across runs.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw_io("cannot open for writing: " + path);
        buf_.reserve(1 << 16);
    }

    ~CsvWriter() { flush_quiet(); }

    void field(std::string_view s) {
        sep();
        buf_.append(s);
    }

    void field(double v) {
        sep();
        char tmp[40];
        auto r = std::to_chars(tmp, tmp + sizeof(tmp), v);
        buf_.append(tmp, r.ptr);
    }

    void field(long long v) {
        sep();
        char tmp[24];
        auto r = std::to_chars(tmp, tmp + sizeof(tmp), v);
        buf_.append(tmp, r.ptr);
    }

    void field(int v) { field(static_cast<long long>(v)); }
    void field(uint32_t v) { field(static_cast<long long>(v)); }

    void end_row() {
        buf_.push_back('\n');
        row_open_ = false;
        if (buf_.size() > (1 << 15)) flush();
    }

    void flush() {
        if (!buf_.empty()) {
            out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
            buf_.clear();
        }
        if (!out_) throw_io("write failed: " + path_);
    }

private:
    void sep() {
        if (row_open_) buf_.push_back(',');
        row_open_ = true;
    }

    void flush_quiet() {
        if (!buf_.empty() && out_) out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        buf_.clear();
    }

    std::string path_;
    std::ofstream out_;
    std::string buf_;
    bool row_open_ = false;
};

inline double parse_double(std::string_view s) {
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{}) throw_invalid("bad numeric field: '" + std::string(s) + "'");
    return v;
}

inline long long parse_int(std::string_view s) {
    long long v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{}) throw_invalid("bad integer field: '" + std::string(s) + "'");
    return v;
}

/// Streams a CSV file (no quoting/escaping; our formats never need it).
/// Calls fn with the split fields of each row, header included as row 0.
inline void read_csv(const std::string& path,
                     const std::function<void(const std::vector<std::string_view>&, size_t)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open for reading: " + path);
    std::string line;
    std::vector<std::string_view> fields;
    size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        fields.clear();
        size_t start = 0;
        while (true) {
            const size_t pos = line.find(',', start);
            if (pos == std::string::npos) {
                fields.emplace_back(line.data() + start, line.size() - start);
                break;
            }
            fields.emplace_back(line.data() + start, pos - start);
            start = pos + 1;
        }
        fn(fields, row++);
    }
}

}  // namespace proxsim
