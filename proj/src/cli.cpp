#include "ucaprio/cli.hpp"

#include "ucaprio/csv.hpp"
#include "ucaprio/json_io.hpp"
#include "text_util.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#ifndef UCAPRIO_VERSION
#define UCAPRIO_VERSION "0.0.0"
#endif

namespace ucaprio::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string tool_version() { return UCAPRIO_VERSION; }

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 digest failed");
    }
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) {
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return os.str();
}

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError(path.string(), "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError(path.string(), "cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw FileError(path.string(), "write failed");
}

} // namespace

std::string file_sha256(const fs::path& path) { return sha256_hex(slurp(path)); }

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

// ---------------------------------------------------------------------------
// RunManifest

json RunManifest::to_json(bool with_timestamp) const {
    json j = {
        {"tool_version", tool_version},
        {"seed", seed},
        {"num_simulations", num_simulations},
        {"variation_range", variation_range},
        {"input_digests", input_digests},
        {"ej_source", ej_source},
        {"stable_mean_shift", stable_mean_shift},
        {"stable_max_std", stable_max_std},
    };
    j["fixed_max_sif"] = fixed_max_sif ? json(*fixed_max_sif) : json(nullptr);
    j["fixed_max_ej"] = fixed_max_ej ? json(*fixed_max_ej) : json(nullptr);
    if (with_timestamp) j["timestamp"] = timestamp;
    return j;
}

RunManifest RunManifest::from_json(const json& j) {
    RunManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.num_simulations = j.at("num_simulations").get<int>();
    m.variation_range = j.at("variation_range").get<double>();
    m.input_digests = j.at("input_digests").get<std::map<std::string, std::string>>();
    m.timestamp = j.value("timestamp", std::string());
    m.ej_source = j.value("ej_source", std::string("mcs"));
    if (j.contains("fixed_max_sif") && !j["fixed_max_sif"].is_null()) m.fixed_max_sif = j["fixed_max_sif"].get<int>();
    if (j.contains("fixed_max_ej") && !j["fixed_max_ej"].is_null()) m.fixed_max_ej = j["fixed_max_ej"].get<double>();
    m.stable_mean_shift = j.value("stable_mean_shift", 1.0);
    m.stable_max_std = j.value("stable_max_std", 0.5);
    return m;
}

std::string RunManifest::run_id() const { return sha256_hex(to_json(false).dump()).substr(0, 12); }

// ---------------------------------------------------------------------------
// validate

int cmd_validate(const DatasetManifest& manifest, std::ostream& out, std::ostream& err) {
    RawDataset raw;
    try {
        raw = read_dataset(manifest);
    } catch (const FileError& e) {
        err << "error: " << e.what() << "\n";
        return kIoOrFormatFailure;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return kIoOrFormatFailure;
    }
    for (const auto& w : raw.warnings) err << "warning: " << w << "\n";
    const auto violations = check(raw);
    for (const auto& v : violations) out << v.describe() << "\n";
    if (!violations.empty()) {
        out << violations.size() << " violation(s)\n";
        return kValidationFailure;
    }
    out << "ok: " << raw.losses.size() << " sub-losses, " << raw.controllers.size() << " controllers, "
        << raw.ucas.size() << " UCAs\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// compute

json stats_document(const PipelineResult& result, const SimulationConfig& config) {
    std::map<std::string, double> saw_by_id;
    for (std::size_t i = 0; i < result.initial.ids.size(); ++i) saw_by_id[result.initial.ids[i]] = result.initial.scores[i];

    std::map<std::string, std::map<std::string, int>> expert_ranks;
    json experts = json::array();
    for (const auto& er : result.expert_rankings) {
        experts.push_back(er.expert_id);
        for (std::size_t i = 0; i < er.ranking.ids.size(); ++i) {
            expert_ranks[er.ranking.ids[i]][er.expert_id] = er.ranking.ranks[i];
        }
    }

    json ucas = json::array();
    for (const auto& entry : result.ordering) {
        json j = entry.stats;
        j["final_rank"] = entry.final_rank;
        j["saw_score"] = saw_by_id.at(entry.stats.uca_id);
        j["expert_initial_ranks"] = expert_ranks[entry.stats.uca_id];
        ucas.push_back(std::move(j));
    }
    return json{{"num_simulations", config.num_simulations},
                {"variation_range", config.variation_range},
                {"seed", config.seed},
                {"experts", std::move(experts)},
                {"ucas", std::move(ucas)}};
}

ComputeOutcome cmd_compute(const DatasetManifest& manifest, const ComputeOptions& options, std::ostream& out,
                           std::ostream& err) {
    std::vector<std::string> warnings;
    const auto dataset = parse_dataset(manifest, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";

    ComputeOutcome outcome;
    outcome.result = run_pipeline(dataset, options.pipeline);
    for (const auto& w : outcome.result.matrix.warnings) err << "warning: " << w << "\n";

    const auto& sim = options.pipeline.simulation;
    auto& m = outcome.manifest;
    m.tool_version = tool_version();
    m.seed = sim.seed;
    m.num_simulations = sim.num_simulations;
    m.variation_range = sim.variation_range;
    for (const auto& file : manifest.files()) m.input_digests[file.string()] = file_sha256(file);
    m.timestamp = options.timestamp ? *options.timestamp : utc_timestamp();
    m.ej_source = to_string(options.pipeline.ej_source);
    m.fixed_max_sif = options.pipeline.axes.max_sif;
    m.fixed_max_ej = options.pipeline.axes.max_ej_inverted;
    m.stable_mean_shift = sim.stability.max_mean_shift;
    m.stable_max_std = sim.stability.max_rank_std;

    outcome.run_dir = options.out_root / m.run_id();
    std::error_code ec;
    fs::create_directories(outcome.run_dir, ec);
    if (ec) throw FileError(outcome.run_dir.string(), "cannot create directory: " + ec.message());

    const auto& matrix = outcome.result.matrix;
    write_file(outcome.run_dir / "matrix.csv", render(matrix, RenderFormat::Csv));
    write_file(outcome.run_dir / "matrix.json", render(matrix, RenderFormat::Json));
    write_file(outcome.run_dir / "matrix.svg", render(matrix, RenderFormat::Svg));
    write_file(outcome.run_dir / "stats.json", stats_document(outcome.result, sim).dump(2) + "\n");
    write_file(outcome.run_dir / "run-manifest.json", m.to_json().dump(2) + "\n");

    out << render(matrix, options.format);
    err << "results written to " << outcome.run_dir.string() << "\n";
    return outcome;
}

// ---------------------------------------------------------------------------
// report

namespace {

class TextTable {
public:
    explicit TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void print(std::ostream& os, const std::string& indent = "  ") const {
        std::vector<std::size_t> widths;
        for (const auto& row : rows_) {
            widths.resize(std::max(widths.size(), row.size()));
            for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
        }
        for (const auto& row : rows_) {
            os << indent;
            for (std::size_t i = 0; i < row.size(); ++i) {
                os << row[i];
                if (i + 1 < row.size()) os << std::string(widths[i] - row[i].size() + 2, ' ');
            }
            os << "\n";
        }
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

} // namespace

void cmd_report(const fs::path& results, int top, std::ostream& out) {
    const auto csv_path = results / "matrix.csv";
    const auto stats_path = results / "stats.json";
    for (const auto& p : {csv_path, stats_path}) {
        if (!fs::exists(p)) throw MissingResults(p.string() + " not found; run compute first");
    }
    auto records = parse_matrix_csv(slurp(csv_path), csv_path.string());
    json stats;
    try {
        stats = json::parse(slurp(stats_path));
    } catch (const json::parse_error& e) {
        throw FormatError(stats_path.string(), 0, e.what());
    }

    std::map<Priority, int> counts;
    for (auto p : kPriorities) counts[p] = 0;
    for (const auto& r : records) ++counts[r.priority];

    out << "Priority counts\n";
    TextTable count_table({"level", "colour", "count"});
    for (auto p : kPriorities) count_table.add({to_string(p), colour_name(p), std::to_string(counts[p])});
    count_table.add({"total", "", std::to_string(records.size())});
    count_table.print(out);

    std::stable_sort(records.begin(), records.end(), [](const PriorityRecord& a, const PriorityRecord& b) {
        if (a.priority != b.priority) return a.priority < b.priority;
        if (a.final_rank != b.final_rank) {
            if (!a.final_rank) return false;
            if (!b.final_rank) return true;
            return *a.final_rank < *b.final_rank;
        }
        if (a.sif != b.sif) return a.sif > b.sif;
        return a.uca_id < b.uca_id;
    });
    const auto shown = std::min<std::size_t>(records.size(), static_cast<std::size_t>(std::max(top, 0)));
    out << "\nTop " << shown << " priority UCAs\n";
    TextTable top_table({"uca_id", "priority", "sif", "ej", "final_rank"});
    for (std::size_t i = 0; i < shown; ++i) {
        const auto& r = records[i];
        top_table.add({r.uca_id, to_string(r.priority), std::to_string(r.sif), detail::format_fixed(r.ej, 2),
                       r.final_rank ? std::to_string(*r.final_rank) : "-"});
    }
    top_table.print(out);

    const auto& ucas = stats.contains("ucas") ? stats["ucas"] : json::array();
    std::vector<MonteCarloStats> sensitive;
    for (const auto& u : ucas) {
        auto s = u.get<MonteCarloStats>();
        if (s.stability == Stability::Sensitive) sensitive.push_back(std::move(s));
    }
    out << "\nSensitive UCAs (" << sensitive.size() << ")\n";
    if (sensitive.empty()) {
        out << "  none\n";
    } else {
        TextTable t({"uca_id", "initial_rank", "mean_rank", "rank_std"});
        for (const auto& s : sensitive) {
            t.add({s.uca_id, std::to_string(s.initial_rank), detail::format_fixed(s.mean_rank, 2),
                   detail::format_fixed(s.rank_std, 2)});
        }
        t.print(out);
    }

    std::vector<std::string> experts;
    if (stats.contains("experts")) experts = stats["experts"].get<std::vector<std::string>>();
    out << "\nInitial rank per expert\n";
    if (experts.empty() || ucas.empty()) {
        out << "  no expert sheets\n";
        return;
    }
    std::vector<std::string> header{"uca_id"};
    header.insert(header.end(), experts.begin(), experts.end());
    header.push_back("combined");
    header.push_back("final_rank");
    TextTable t(header);
    for (const auto& u : ucas) {
        std::vector<std::string> row{u.at("uca_id").get<std::string>()};
        const auto& per_expert = u.at("expert_initial_ranks");
        for (const auto& e : experts) {
            row.push_back(per_expert.contains(e) ? std::to_string(per_expert[e].get<int>()) : "-");
        }
        row.push_back(std::to_string(u.at("initial_rank").get<int>()));
        row.push_back(std::to_string(u.at("final_rank").get<int>()));
        t.add(std::move(row));
    }
    t.print(out);
}

// ---------------------------------------------------------------------------
// run

namespace {

struct DatasetFlags {
    std::string losses, controllers, ucas, scores, dataset;

    void attach(CLI::App& app) {
        app.add_option("--losses", losses, "losses.csv");
        app.add_option("--controllers", controllers, "controllers.csv");
        app.add_option("--ucas", ucas, "ucas.csv");
        app.add_option("--scores", scores, "scores.csv");
        app.add_option("--dataset", dataset, "dataset.json (instead of the CSV files)");
    }

    DatasetManifest manifest() const {
        if (!dataset.empty()) {
            if (!losses.empty() || !controllers.empty() || !ucas.empty() || !scores.empty()) {
                throw ConfigError("--dataset cannot be combined with --losses/--controllers/--ucas/--scores");
            }
            return DatasetManifest::json(dataset);
        }
        if (losses.empty() || controllers.empty() || ucas.empty()) {
            throw ConfigError("--losses, --controllers and --ucas are required (or --dataset)");
        }
        std::optional<fs::path> s;
        if (!scores.empty()) s = scores;
        return DatasetManifest::csv(losses, controllers, ucas, s);
    }
};

std::uint64_t parse_seed(const std::string& text, const char* what) {
    auto t = detail::trim(text);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError(std::string(what) + " must be an unsigned 64-bit integer, got \"" + text + "\"");
    }
    return v;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Prioritize STPA unsafe control actions with SIF, expert judgment and Monte Carlo ranking",
                 "uca-prioritizer"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);

    DatasetFlags validate_flags;
    auto* validate = app.add_subcommand("validate", "Check a dataset and list every violation");
    validate_flags.attach(*validate);

    DatasetFlags compute_flags;
    int simulations = 1000;
    double variation = 0.10;
    std::string seed_text;
    std::string out_root = "out";
    std::string format = "text";
    int fixed_max_sif = 0;
    double fixed_max_ej = 0.0;
    std::string ej_source = "mcs";
    unsigned threads = 0;
    double stable_mean_shift = 1.0;
    double stable_max_std = 0.5;
    auto* compute = app.add_subcommand("compute", "Run the full prioritization and write results");
    compute_flags.attach(*compute);
    compute->add_option("--simulations", simulations, "Monte Carlo iterations")->capture_default_str();
    compute->add_option("--variation", variation, "Perturbation range, in (0, 1]")->capture_default_str();
    compute->add_option("--seed", seed_text, "RNG seed (overrides UCA_PRIORITIZER_SEED; default 0)");
    compute->add_option("--out", out_root, "Output root; results go to <out>/<run-id>/")->capture_default_str();
    compute->add_option("--format", format, "Matrix printed to stdout: text|svg|json|csv")->capture_default_str();
    auto* max_sif_opt = compute->add_option("--fixed-max-sif", fixed_max_sif, "Pin the SIF axis maximum");
    auto* max_ej_opt = compute->add_option("--fixed-max-ej", fixed_max_ej, "Pin the inverted-EJ axis maximum");
    compute->add_option("--ej-source", ej_source, "EJ axis source: mcs|given")->capture_default_str();
    compute->add_option("--threads", threads, "Simulation worker threads (0 = all cores)")->capture_default_str();
    compute->add_option("--stable-mean-shift", stable_mean_shift, "Stable if |mean - initial| < this")
        ->capture_default_str();
    compute->add_option("--stable-max-std", stable_max_std, "Stable if rank std <= this")->capture_default_str();

    std::string results_dir;
    int top = 10;
    auto* report = app.add_subcommand("report", "Summarize a results directory");
    report->add_option("--results", results_dir, "Directory written by compute")->required();
    report->add_option("--top", top, "Number of top-priority UCAs to list")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << tool_version() << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kIoOrFormatFailure;
    }

    try {
        if (validate->parsed()) return cmd_validate(validate_flags.manifest(), out, err);

        if (compute->parsed()) {
            ComputeOptions opts;
            auto& sim = opts.pipeline.simulation;
            sim.num_simulations = simulations;
            sim.variation_range = variation;
            sim.threads = threads;
            sim.stability = {stable_mean_shift, stable_max_std};
            if (!seed_text.empty()) {
                sim.seed = parse_seed(seed_text, "--seed");
            } else if (const char* env = std::getenv("UCA_PRIORITIZER_SEED"); env && *env) {
                sim.seed = parse_seed(env, "UCA_PRIORITIZER_SEED");
            }
            sim.validate();
            if (max_sif_opt->count()) {
                if (fixed_max_sif <= 0) throw ConfigError("--fixed-max-sif must be positive");
                opts.pipeline.axes.max_sif = fixed_max_sif;
            }
            if (max_ej_opt->count()) {
                if (!(fixed_max_ej > 0.0)) throw ConfigError("--fixed-max-ej must be positive");
                opts.pipeline.axes.max_ej_inverted = fixed_max_ej;
            }
            opts.pipeline.ej_source = parse_ej_source(ej_source);
            opts.out_root = out_root;
            opts.format = parse_render_format(format);
            cmd_compute(compute_flags.manifest(), opts, out, err);
            return kOk;
        }

        if (report->parsed()) {
            if (top < 0) throw ConfigError("--top must be >= 0");
            cmd_report(results_dir, top, out);
            return kOk;
        }
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << "\n";
        return kIoOrFormatFailure;
    } catch (const UnsupportedFormat& e) {
        err << "usage error: " << e.what() << "\n";
        return kIoOrFormatFailure;
    } catch (const FileError& e) {
        err << "error: " << e.what() << "\n";
        return kIoOrFormatFailure;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return kIoOrFormatFailure;
    } catch (const MissingResults& e) {
        err << "error: " << e.what() << "\n";
        return kIoOrFormatFailure;
    } catch (const ValidationError& e) {
        err << "invalid dataset: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const NoExperts& e) {
        err << "invalid dataset: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const EmptyInput& e) {
        err << "invalid dataset: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kInternalError;
}

} // namespace ucaprio::cli
