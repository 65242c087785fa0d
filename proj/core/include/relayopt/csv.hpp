#pragma once

#include <cstdio>
#include <ostream>
#include <string>

namespace relayopt {

/// Doubles rendered with 17 significant digits: round-trip exact and
/// byte-stable for identical inputs.
inline std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

/// Comma-separated row writer with LF line endings and no quoting; all
/// emitted fields are plain numbers or identifiers.
class CsvRow {
  public:
    explicit CsvRow(std::ostream& out) : out_(out) {}
    ~CsvRow() { out_ << '\n'; }

    CsvRow(const CsvRow&) = delete;
    CsvRow& operator=(const CsvRow&) = delete;

    CsvRow& field(const std::string& text) {
        if (!first_) out_ << ',';
        first_ = false;
        out_ << text;
        return *this;
    }
    CsvRow& field(double value) { return field(format_double(value)); }
    CsvRow& field(long long value) { return field(std::to_string(value)); }
    CsvRow& field(int value) { return field(std::to_string(value)); }

  private:
    std::ostream& out_;
    bool first_ = true;
};

}  // namespace relayopt
