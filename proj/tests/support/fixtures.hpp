#pragma once

#include "ucaprio/domain.hpp"
#include "ucaprio/ej.hpp"
#include "ucaprio/ingestion.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

inline std::filesystem::path source_root() { return UCAPRIO_SOURCE_DIR; }

inline ucaprio::DatasetManifest fixture_manifest(const std::filesystem::path& dir, bool with_scores = true) {
    std::optional<std::filesystem::path> scores;
    if (with_scores) scores = dir / "scores.csv";
    return ucaprio::DatasetManifest::csv(dir / "losses.csv", dir / "controllers.csv", dir / "ucas.csv", scores);
}

inline std::filesystem::path evtol_dir() { return source_root() / "fixtures" / "evtol"; }
inline std::filesystem::path saw_example_dir() { return source_root() / "fixtures" / "saw_example"; }
inline std::filesystem::path two_experts_dir() { return source_root() / "tests" / "fixtures" / "two_experts"; }

inline ucaprio::Dataset evtol() { return ucaprio::parse_dataset(fixture_manifest(evtol_dir())); }
inline ucaprio::Dataset saw_example() { return ucaprio::parse_dataset(fixture_manifest(saw_example_dir())); }

inline ucaprio::ScoreMatrix worked_example_matrix() {
    ucaprio::ScoreMatrix m;
    m.add("UCA-1.1.1", {3, 3, 2, 3, 0});
    m.add("UCA-1.2.1", {2, 2, 3, 3, 1});
    m.add("UCA-2.1.1", {1, 2, 1, 2, 1});
    return m;
}

struct CaseStudyRow {
    const char* uca_id;
    int pms;
    int cif;
    double ej;
};

inline const std::vector<CaseStudyRow>& case_study() {
    static const std::vector<CaseStudyRow> rows = {
        {"UCA-21.5.1", 20, 6, 59.4072555},   {"UCA-18.2.1", 20, 5, 29.85918475},
        {"UCA-8.2.1", 20, 4, 29.77339235},   {"UCA-6.1.1", 20, 3, 29.87185488},
        {"UCA-9.2.1", 20, 2, 58.99621273},   {"UCA-14.5.1", 20, 1, 59.45807616},
        {"UCA-29.5.1", 12, 5, 208.2534994},  {"UCA-18.5.1", 12, 6, 208.6651534},
        {"UCA-13.5.1", 4, 6, 208.8436053},   {"UCA-47.1.1", 7, 4, 266.8445137},
    };
    return rows;
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("ucaprio-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Copies the eVTOL fixture into `dir` so a test can corrupt one file.
inline void copy_evtol(const std::filesystem::path& dir) {
    for (const char* f : {"losses.csv", "controllers.csv", "ucas.csv", "scores.csv"}) {
        std::filesystem::copy_file(evtol_dir() / f, dir / f, std::filesystem::copy_options::overwrite_existing);
    }
}

} // namespace testing
