#include "ucaprio/matrix.hpp"

#include "ucaprio/csv.hpp"
#include "text_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ucaprio {

using nlohmann::json;

std::vector<double> invert_ej(std::span<const double> ej) {
    if (ej.empty()) return {};
    const double top = *std::max_element(ej.begin(), ej.end());
    std::vector<double> out;
    out.reserve(ej.size());
    for (double v : ej) out.push_back(top - v);
    return out;
}

int scale_axis(double value, double axis_max) {
    if (!(axis_max > 0.0)) {
        throw AxisDegenerate("axis maximum is " + detail::format_real(axis_max) + "; cannot scale");
    }
    const double bin = std::floor(value / axis_max * 4.0);
    return static_cast<int>(std::clamp(bin, 0.0, 4.0));
}

Priority cell_priority(int sif_scaled, int ej_scaled) {
    if (sif_scaled < 0 || sif_scaled >= kGridSize || ej_scaled < 0 || ej_scaled >= kGridSize) {
        throw Error("cell (" + std::to_string(sif_scaled) + ", " + std::to_string(ej_scaled) + ") is off the grid");
    }
    switch (sif_scaled + ej_scaled) {
    case 0:
    case 1: return Priority::P5;
    case 2:
    case 3: return Priority::P4;
    case 4: return Priority::P3;
    case 5:
    case 6: return Priority::P2;
    default: return Priority::P1;
    }
}

namespace {

// Scales one axis, handling the degenerate and pinned cases.
std::vector<int> scale_values(const std::vector<double>& values, double axis_max, const char* axis,
                              std::vector<std::string>& warnings) {
    std::vector<int> out;
    out.reserve(values.size());
    if (!(axis_max > 0.0)) {
        // Degenerate axis: everyone goes to the top bin.
        warnings.push_back(std::string(axis) + " axis is degenerate (maximum 0); all UCAs placed in bin 4");
        out.assign(values.size(), kGridSize - 1);
        return out;
    }
    bool clamped = false;
    for (double v : values) {
        clamped = clamped || v > axis_max;
        out.push_back(scale_axis(v, axis_max));
    }
    if (clamped) {
        warnings.push_back(std::string(axis) + " values exceed the pinned maximum " + detail::format_real(axis_max) +
                           "; clamped to bin 4");
    }
    return out;
}

} // namespace

PriorityMatrix build_matrix(std::span<const MatrixInput> inputs, const AxisLimits& limits) {
    if (inputs.empty()) throw EmptyInput("priority matrix needs at least one UCA");

    PriorityMatrix m;
    std::vector<double> ej;
    std::vector<double> sif;
    for (const auto& in : inputs) {
        if (in.sif <= 0) throw Error(in.uca_id + ": sif must be positive, got " + std::to_string(in.sif));
        ej.push_back(in.ej);
        sif.push_back(in.sif);
    }
    const auto inverted = invert_ej(ej);

    m.max_sif = limits.max_sif ? *limits.max_sif : static_cast<int>(*std::max_element(sif.begin(), sif.end()));
    m.max_ej_inverted = limits.max_ej_inverted ? *limits.max_ej_inverted
                                               : *std::max_element(inverted.begin(), inverted.end());

    const auto sif_bins = scale_values(sif, m.max_sif, "SIF", m.warnings);
    const auto ej_bins = scale_values(inverted, m.max_ej_inverted, "EJ", m.warnings);

    for (int s = 0; s < kGridSize; ++s) {
        for (int e = 0; e < kGridSize; ++e) m.cells[s][e] = {s, e, cell_priority(s, e), {}};
    }
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto& in = inputs[i];
        PriorityRecord r;
        r.uca_id = in.uca_id;
        r.pms = in.pms;
        r.cif = in.cif;
        r.sif = in.sif;
        r.ej = in.ej;
        r.ej_inverted = inverted[i];
        r.sif_scaled = sif_bins[i];
        r.ej_scaled = ej_bins[i];
        r.priority = cell_priority(r.sif_scaled, r.ej_scaled);
        r.final_rank = in.final_rank;
        r.stability = in.stability;
        m.cells[r.sif_scaled][r.ej_scaled].ucas.push_back(r.uca_id);
        m.records.push_back(std::move(r));
    }
    return m;
}

std::map<Priority, int> priority_counts(const PriorityMatrix& matrix) {
    std::map<Priority, int> counts;
    for (auto p : kPriorities) counts[p] = 0;
    for (const auto& row : matrix.cells) {
        for (const auto& cell : row) counts[cell.priority] += static_cast<int>(cell.ucas.size());
    }
    return counts;
}

RenderFormat parse_render_format(std::string_view name) {
    auto n = detail::to_lower(detail::trim(name));
    if (n == "text") return RenderFormat::Text;
    if (n == "svg") return RenderFormat::Svg;
    if (n == "json") return RenderFormat::Json;
    if (n == "csv") return RenderFormat::Csv;
    throw UnsupportedFormat("unsupported format \"" + std::string(name) + "\" (expected text, svg, json or csv)");
}

const char* file_extension(RenderFormat format) {
    switch (format) {
    case RenderFormat::Text: return "txt";
    case RenderFormat::Svg: return "svg";
    case RenderFormat::Json: return "json";
    case RenderFormat::Csv: return "csv";
    }
    return "txt";
}

// ---------------------------------------------------------------------------
// Renderers

namespace {

std::size_t display_width(std::string_view s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string pad(std::string s, std::size_t width) {
    auto w = display_width(s);
    if (w < width) s.append(width - w, ' ');
    return s;
}

std::string render_text(const PriorityMatrix& m) {
    std::array<std::array<std::string, kGridSize>, kGridSize> content;
    std::array<std::size_t, kGridSize> widths{};
    for (int s = 0; s < kGridSize; ++s) {
        for (int e = 0; e < kGridSize; ++e) {
            const auto& cell = m.cells[s][e];
            std::string text = std::string(to_string(cell.priority)) + " ";
            if (cell.ucas.empty()) {
                text += "·";
            } else {
                for (std::size_t i = 0; i < cell.ucas.size(); ++i) text += (i ? ", " : "") + cell.ucas[i];
            }
            content[s][e] = text;
            widths[e] = std::max(widths[e], display_width(text));
        }
    }

    std::ostringstream os;
    os << "Priority matrix: max SIF " << m.max_sif << ", max EJ (inverted) "
       << detail::format_fixed(m.max_ej_inverted, 2) << "\n";
    os << "SIF\n";
    for (int s = kGridSize - 1; s >= 0; --s) {
        os << "  " << s << " |";
        for (int e = 0; e < kGridSize; ++e) os << " " << pad(content[s][e], widths[e]) << " |";
        os << "\n";
    }
    os << "    +";
    for (int e = 0; e < kGridSize; ++e) os << std::string(widths[e] + 2, '-') << "+";
    os << "\n     ";
    for (int e = 0; e < kGridSize; ++e) os << " " << pad(std::to_string(e), widths[e]) << "  ";
    os << " EJ (inverted)\n";
    os << "Legend:";
    for (auto p : kPriorities) os << " " << to_string(p) << "=" << colour_name(p);
    os << "\n";
    return os.str();
}

const char* hex_colour(Priority p) {
    switch (p) {
    case Priority::P1: return "#8b0000";
    case Priority::P2: return "#e53935";
    case Priority::P3: return "#fb8c00";
    case Priority::P4: return "#fdd835";
    case Priority::P5: return "#43a047";
    }
    return "#ffffff";
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

std::string render_svg(const PriorityMatrix& m) {
    constexpr int cell = 140;
    constexpr int left = 70;
    constexpr int top = 40;
    constexpr int line_height = 14;
    const int width = left + kGridSize * cell + 20;
    const int height = top + kGridSize * cell + 70;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"sans-serif\">\n";
    os << "  <title>UCA priority matrix</title>\n";
    for (int s = 0; s < kGridSize; ++s) {
        for (int e = 0; e < kGridSize; ++e) {
            const auto& c = m.cells[s][e];
            const int x = left + e * cell;
            const int y = top + (kGridSize - 1 - s) * cell;
            os << "  <g>\n";
            os << "    <rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\""
               << cell << "\" fill=\"" << hex_colour(c.priority) << "\" stroke=\"#ffffff\" stroke-width=\"2\""
               << " data-sif-scaled=\"" << s << "\" data-ej-scaled=\"" << e << "\" data-priority=\""
               << to_string(c.priority) << "\"/>\n";
            os << "    <text x=\"" << x + 6 << "\" y=\"" << y + 16 << "\" font-size=\"11\" fill=\"#ffffff\">"
               << to_string(c.priority) << "</text>\n";
            for (std::size_t i = 0; i < c.ucas.size(); ++i) {
                os << "    <text x=\"" << x + 6 << "\" y=\"" << y + 32 + static_cast<int>(i) * line_height
                   << "\" font-size=\"11\" fill=\"#000000\">" << xml_escape(c.ucas[i]) << "</text>\n";
            }
            os << "  </g>\n";
        }
    }
    for (int i = 0; i < kGridSize; ++i) {
        os << "  <text x=\"" << left - 16 << "\" y=\"" << top + (kGridSize - 1 - i) * cell + cell / 2
           << "\" font-size=\"12\" text-anchor=\"middle\">" << i << "</text>\n";
        os << "  <text x=\"" << left + i * cell + cell / 2 << "\" y=\"" << top + kGridSize * cell + 18
           << "\" font-size=\"12\" text-anchor=\"middle\">" << i << "</text>\n";
    }
    os << "  <text x=\"18\" y=\"" << top + kGridSize * cell / 2 << "\" font-size=\"14\" text-anchor=\"middle\""
       << " transform=\"rotate(-90 18 " << top + kGridSize * cell / 2 << ")\">SIF</text>\n";
    os << "  <text x=\"" << left + kGridSize * cell / 2 << "\" y=\"" << top + kGridSize * cell + 44
       << "\" font-size=\"14\" text-anchor=\"middle\">EJ (inverted)</text>\n";
    os << "  <text x=\"" << left << "\" y=\"24\" font-size=\"12\">max SIF " << m.max_sif << ", max EJ (inverted) "
       << detail::format_fixed(m.max_ej_inverted, 2) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

json record_json(const PriorityRecord& r) {
    json j = {
        {"uca_id", r.uca_id},
        {"pms", r.pms},
        {"cif", r.cif},
        {"sif", r.sif},
        {"ej", r.ej},
        {"ej_inverted", r.ej_inverted},
        {"sif_scaled", r.sif_scaled},
        {"ej_scaled", r.ej_scaled},
        {"priority", to_string(r.priority)},
    };
    j["final_rank"] = r.final_rank ? json(*r.final_rank) : json(nullptr);
    j["stability"] = r.stability ? json(to_string(*r.stability)) : json(nullptr);
    return j;
}

std::string render_json(const PriorityMatrix& m) {
    json cells = json::array();
    for (int s = 0; s < kGridSize; ++s) {
        for (int e = 0; e < kGridSize; ++e) {
            const auto& c = m.cells[s][e];
            cells.push_back({{"sif_scaled", s}, {"ej_scaled", e}, {"priority", to_string(c.priority)}, {"ucas", c.ucas}});
        }
    }
    json records = json::array();
    for (const auto& r : m.records) records.push_back(record_json(r));
    json doc = {
        {"max_sif", m.max_sif},
        {"max_ej_inverted", m.max_ej_inverted},
        {"cells", std::move(cells)},
        {"records", std::move(records)},
    };
    return doc.dump(2) + "\n";
}

const std::vector<std::string> kCsvHeader = {"uca_id",    "pms",       "cif",      "sif",        "ej",       "ej_inverted",
                                             "sif_scaled", "ej_scaled", "priority", "final_rank", "stability"};

std::string render_csv(const PriorityMatrix& m) {
    std::string out = csv::format_row(kCsvHeader);
    for (const auto& r : m.records) {
        out += csv::format_row({
            r.uca_id,
            std::to_string(r.pms),
            std::to_string(r.cif),
            std::to_string(r.sif),
            detail::format_real(r.ej),
            detail::format_real(r.ej_inverted),
            std::to_string(r.sif_scaled),
            std::to_string(r.ej_scaled),
            to_string(r.priority),
            r.final_rank ? std::to_string(*r.final_rank) : std::string(),
            r.stability ? to_string(*r.stability) : std::string(),
        });
    }
    return out;
}

} // namespace

std::string render(const PriorityMatrix& matrix, RenderFormat format) {
    switch (format) {
    case RenderFormat::Text: return render_text(matrix);
    case RenderFormat::Svg: return render_svg(matrix);
    case RenderFormat::Json: return render_json(matrix);
    case RenderFormat::Csv: return render_csv(matrix);
    }
    throw UnsupportedFormat("unsupported render format");
}

// ---------------------------------------------------------------------------
// Parsers

namespace {

Priority require_priority(const std::string& text, const std::string& source, std::size_t line) {
    auto p = parse_priority(text);
    if (!p) throw FormatError(source, line, "unknown priority \"" + text + "\"");
    return *p;
}

template <typename T>
T json_get(const json& obj, const char* key, const std::string& source) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw FormatError(source, 0, std::string(key) + ": " + e.what());
    }
}

} // namespace

PriorityMatrix parse_matrix_json(std::string_view text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(source, 0, e.what());
    }
    PriorityMatrix m;
    m.max_sif = json_get<int>(doc, "max_sif", source);
    m.max_ej_inverted = json_get<double>(doc, "max_ej_inverted", source);
    auto cells = json_get<json>(doc, "cells", source);
    if (!cells.is_array() || cells.size() != kGridSize * kGridSize) {
        throw FormatError(source, 0, "cells must be an array of 25 entries");
    }
    for (const auto& c : cells) {
        const int s = json_get<int>(c, "sif_scaled", source);
        const int e = json_get<int>(c, "ej_scaled", source);
        if (s < 0 || s >= kGridSize || e < 0 || e >= kGridSize) throw FormatError(source, 0, "cell off the grid");
        auto& cell = m.cells[s][e];
        cell.sif_scaled = s;
        cell.ej_scaled = e;
        cell.priority = require_priority(json_get<std::string>(c, "priority", source), source, 0);
        cell.ucas = json_get<std::vector<std::string>>(c, "ucas", source);
    }
    if (doc.contains("records")) {
        for (const auto& j : doc["records"]) {
            PriorityRecord r;
            r.uca_id = json_get<std::string>(j, "uca_id", source);
            r.pms = json_get<int>(j, "pms", source);
            r.cif = json_get<int>(j, "cif", source);
            r.sif = json_get<int>(j, "sif", source);
            r.ej = json_get<double>(j, "ej", source);
            r.ej_inverted = json_get<double>(j, "ej_inverted", source);
            r.sif_scaled = json_get<int>(j, "sif_scaled", source);
            r.ej_scaled = json_get<int>(j, "ej_scaled", source);
            r.priority = require_priority(json_get<std::string>(j, "priority", source), source, 0);
            if (j.contains("final_rank") && !j["final_rank"].is_null()) r.final_rank = j["final_rank"].get<int>();
            if (j.contains("stability") && !j["stability"].is_null()) {
                r.stability = parse_stability(j["stability"].get<std::string>());
                if (!r.stability) throw FormatError(source, 0, "unknown stability");
            }
            m.records.push_back(std::move(r));
        }
    }
    return m;
}

std::vector<PriorityRecord> parse_matrix_csv(std::string_view text, const std::string& source) {
    auto table = csv::parse(text, source);
    if (table.header != kCsvHeader) throw FormatError(source, 1, "unexpected matrix.csv header");
    auto as_int = [&](const std::string& s, std::size_t line) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw FormatError(source, line, "expected integer, got \"" + s + "\"");
        return v;
    };
    auto as_real = [&](const std::string& s, std::size_t line) {
        double v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
            throw FormatError(source, line, "expected real, got \"" + s + "\"");
        }
        return v;
    };
    std::vector<PriorityRecord> out;
    for (const auto& row : table.rows) {
        const auto& f = row.fields;
        PriorityRecord r;
        r.uca_id = f[0];
        r.pms = as_int(f[1], row.line);
        r.cif = as_int(f[2], row.line);
        r.sif = as_int(f[3], row.line);
        r.ej = as_real(f[4], row.line);
        r.ej_inverted = as_real(f[5], row.line);
        r.sif_scaled = as_int(f[6], row.line);
        r.ej_scaled = as_int(f[7], row.line);
        r.priority = require_priority(f[8], source, row.line);
        if (!f[9].empty()) r.final_rank = as_int(f[9], row.line);
        if (!f[10].empty()) {
            r.stability = parse_stability(f[10]);
            if (!r.stability) throw FormatError(source, row.line, "unknown stability \"" + f[10] + "\"");
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace ucaprio
