#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ucaprio::csv {

struct Row {
    std::size_t line = 0;  // 1-based line where the record starts
    std::vector<std::string> fields;
};

struct Table {
    std::string source;
    std::vector<std::string> header;
    std::vector<Row> rows;

    // Position of a header column, matched exactly after trimming.
    std::optional<std::size_t> column(std::string_view name) const;
};

// RFC 4180 reader: quoted fields, doubled quotes, embedded newlines, CRLF,
// UTF-8 BOM. Blank lines are skipped. Throws FormatError on an unterminated
// quote or a row whose width differs from the header.
Table parse(std::string_view text, const std::string& source);

// Quotes a field only when it contains a comma, quote or line break.
std::string escape(std::string_view field);

std::string format_row(const std::vector<std::string>& fields);

} // namespace ucaprio::csv
