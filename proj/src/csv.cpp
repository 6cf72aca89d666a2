#include "ucaprio/csv.hpp"

#include "ucaprio/errors.hpp"
#include "text_util.hpp"

namespace ucaprio::csv {

std::optional<std::size_t> Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (detail::trim(header[i]) == name) return i;
    }
    return std::nullopt;
}

namespace {

bool blank(const std::vector<std::string>& fields) {
    return fields.size() == 1 && detail::trim(fields[0]).empty();
}

} // namespace

Table parse(std::string_view text, const std::string& source) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

    Table table;
    table.source = source;
    std::vector<Row> records;

    Row current;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    std::size_t line = 1;
    current.line = 1;

    auto end_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        if (!blank(current.fields)) records.push_back(std::move(current));
        current = Row{};
        current.line = line;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!detail::trim(field).empty()) {
                throw FormatError(source, line, "stray quote inside unquoted field");
            }
            field.clear();
            in_quotes = true;
            field_was_quoted = true;
            break;
        case ',':
            end_field();
            break;
        case '\r':
            break;
        case '\n':
            ++line;
            end_record();
            break;
        default:
            if (field_was_quoted && c != ' ' && c != '\t') {
                throw FormatError(source, line, "characters after closing quote");
            }
            if (!field_was_quoted) field.push_back(c);
            break;
        }
    }
    if (in_quotes) throw FormatError(source, current.line, "unterminated quoted field");
    if (!field.empty() || !current.fields.empty()) end_record();

    if (records.empty()) return table;
    table.header = std::move(records.front().fields);
    for (auto& h : table.header) h = std::string(detail::trim(h));
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].fields.size() != table.header.size()) {
            throw FormatError(source, records[r].line,
                              "expected " + std::to_string(table.header.size()) + " fields, found " +
                                  std::to_string(records[r].fields.size()));
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(fields[i]);
    }
    out.push_back('\n');
    return out;
}

} // namespace ucaprio::csv
