#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace slideocam::io {

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite.
std::string format_number(double value);

/// RFC-4180 field quoting.
std::string csv_escape(std::string_view field);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    CsvWriter& row(const std::vector<std::string>& fields);
    std::string str() const { return text_; }
    std::size_t columns() const { return columns_; }

private:
    void append(const std::vector<std::string>& fields);

    std::size_t columns_;
    std::string text_;
};

/// Minimal RFC-4180 reader, used by tests and tooling to read outputs back.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace slideocam::io
