#pragma once

#include "ucaprio/domain.hpp"

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ucaprio {

inline constexpr int kGridSize = 5;

struct MatrixInput {
    std::string uca_id;
    int pms = 0;
    int cif = 0;
    int sif = 0;
    double ej = 0.0;  // lower = higher priority
    std::optional<int> final_rank;
    std::optional<Stability> stability;
};

// Pinned axis maxima for comparing runs. Unset axes scale dynamically to the
// cohort's own maximum.
struct AxisLimits {
    std::optional<int> max_sif;
    std::optional<double> max_ej_inverted;
};

struct MatrixCell {
    int sif_scaled = 0;
    int ej_scaled = 0;
    Priority priority = Priority::P5;
    std::vector<std::string> ucas;

    bool operator==(const MatrixCell&) const = default;
};

struct PriorityMatrix {
    int max_sif = 0;
    double max_ej_inverted = 0.0;
    // cells[sif_scaled][ej_scaled]
    std::array<std::array<MatrixCell, kGridSize>, kGridSize> cells{};
    std::vector<PriorityRecord> records;  // input order
    std::vector<std::string> warnings;

    const MatrixCell& cell(int sif_scaled, int ej_scaled) const { return cells.at(sif_scaled).at(ej_scaled); }

    bool operator==(const PriorityMatrix& o) const {
        return max_sif == o.max_sif && max_ej_inverted == o.max_ej_inverted && cells == o.cells &&
               records == o.records;
    }
};

// max(ej) - ej_i for every entry.
std::vector<double> invert_ej(std::span<const double> ej);

// floor(value / axis_max * 4), clamped to 0..4. Throws AxisDegenerate when
// axis_max <= 0.
int scale_axis(double value, double axis_max);

// Anti-diagonal binning: s = sif_scaled + ej_scaled; 0-1 P5, 2-3 P4, 4 P3,
// 5-6 P2, 7-8 P1.
Priority cell_priority(int sif_scaled, int ej_scaled);

// Throws EmptyInput for no records, Error for a non-positive sif.
PriorityMatrix build_matrix(std::span<const MatrixInput> inputs, const AxisLimits& limits = {});

// Count per level; every level is present, possibly with 0.
std::map<Priority, int> priority_counts(const PriorityMatrix& matrix);

enum class RenderFormat { Text, Svg, Json, Csv };

RenderFormat parse_render_format(std::string_view name);  // throws UnsupportedFormat
const char* file_extension(RenderFormat format);

std::string render(const PriorityMatrix& matrix, RenderFormat format);

// Inverse of render(Json): cells, maxima and records.
PriorityMatrix parse_matrix_json(std::string_view text, const std::string& source = "matrix.json");

// Inverse of render(Csv).
std::vector<PriorityRecord> parse_matrix_csv(std::string_view text, const std::string& source = "matrix.csv");

} // namespace ucaprio
