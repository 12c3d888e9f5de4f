#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace viscowave {

// Minimal RFC-4180 writer: CRLF line endings, quoting only where required,
// doubles at full round-trip precision so reruns diff byte for byte.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns)
        : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("csv: cannot open " + path);
        width_ = columns.size();
        write_row(columns);
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != width_) throw std::runtime_error("csv: row width mismatch");
        write_row(cells);
    }

    static std::string cell(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.16e", v);
        return buf;
    }

    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(long v) { return std::to_string(v); }

  private:
    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << quoted(cells[i]);
        }
        out_ << "\r\n";
    }

    static std::string quoted(const std::string& s) {
        if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
        std::string q = "\"";
        for (const char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        q += '"';
        return q;
    }

    std::ofstream out_;
    std::size_t width_ = 0;
};

} // namespace viscowave
