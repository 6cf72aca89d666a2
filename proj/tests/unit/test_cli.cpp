#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "ucaprio/cli.hpp"
#include "ucaprio/json_io.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

using namespace ucaprio;
using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "uca-prioritizer");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> dataset_args(const fs::path& dir) {
    return {"--losses",  (dir / "losses.csv").string(), "--controllers", (dir / "controllers.csv").string(),
            "--ucas",    (dir / "ucas.csv").string(),   "--scores",      (dir / "scores.csv").string()};
}

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
}

fs::path only_run_dir(const fs::path& root) {
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(root)) dirs.push_back(e.path());
    REQUIRE(dirs.size() == 1);
    return dirs[0];
}

} // namespace

TEST_CASE("validate accepts the fixture", "[cli]") {
    auto r = invoke(with({"validate"}, dataset_args(testing::evtol_dir())));
    REQUIRE(r.code == cli::kOk);
}

TEST_CASE("validate reports a dangling controller with its row", "[cli]") {
    testing::TempDir dir("cli-ghost");
    testing::copy_evtol(dir.path());
    auto text = testing::read_text(dir / "ucas.csv");
    text.replace(text.find(",COMMANDER,"), 11, ",Ghost,");
    testing::write_text(dir / "ucas.csv", text);
    auto r = invoke(with({"validate"}, dataset_args(dir.path())));
    REQUIRE(r.code == cli::kValidationFailure);
    REQUIRE_THAT(r.out, ContainsSubstring("ucas.csv:7"));
    REQUIRE_THAT(r.out, ContainsSubstring("Ghost"));
}

TEST_CASE("validate lists every violation", "[cli]") {
    testing::TempDir dir("cli-many");
    testing::copy_evtol(dir.path());
    auto text = testing::read_text(dir / "ucas.csv");
    text.replace(text.find(",COMMANDER,"), 11, ",Ghost,");
    text.replace(text.find("L4.3;L5.3"), 9, "L9.9");
    testing::write_text(dir / "ucas.csv", text);
    auto r = invoke(with({"validate"}, dataset_args(dir.path())));
    REQUIRE(r.code == cli::kValidationFailure);
    REQUIRE_THAT(r.out, ContainsSubstring("Ghost"));
    REQUIRE_THAT(r.out, ContainsSubstring("L9.9"));
}

TEST_CASE("validate fails with 2 on a missing file", "[cli]") {
    auto args = dataset_args(testing::evtol_dir());
    args[1] = "/nonexistent/losses.csv";
    REQUIRE(invoke(with({"validate"}, args)).code == cli::kIoOrFormatFailure);
}

TEST_CASE("compute writes all outputs and reproduces the SIF columns", "[cli]") {
    testing::TempDir out("cli-compute");
    auto r = invoke(with({"compute", "--out", out.path().string(), "--simulations", "200"},
                         dataset_args(testing::evtol_dir())));
    REQUIRE(r.code == cli::kOk);
    auto run = only_run_dir(out.path());
    for (const char* f : {"matrix.csv", "matrix.json", "matrix.svg", "stats.json", "run-manifest.json"}) {
        REQUIRE(fs::exists(run / f));
    }
    auto records = parse_matrix_csv(testing::read_text(run / "matrix.csv"));
    REQUIRE(records.size() == 10);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& e = testing::case_study()[i];
        REQUIRE(records[i].uca_id == e.uca_id);
        REQUIRE(records[i].pms == e.pms);
        REQUIRE(records[i].cif == e.cif);
        REQUIRE(records[i].sif == e.pms * e.cif);
    }
    auto manifest = cli::RunManifest::from_json(nlohmann::json::parse(testing::read_text(run / "run-manifest.json")));
    REQUIRE(manifest.num_simulations == 200);
    REQUIRE(manifest.input_digests.size() == 4);
    REQUIRE(run.filename() == manifest.run_id());
    REQUIRE(manifest.to_json().dump(2) + "\n" == testing::read_text(run / "run-manifest.json"));
}

TEST_CASE("simulations and seed flags pass through", "[cli]") {
    testing::TempDir out("cli-two");
    auto r = invoke(with({"compute", "--out", out.path().string(), "--simulations", "2", "--seed", "7"},
                         dataset_args(testing::evtol_dir())));
    REQUIRE(r.code == cli::kOk);
    auto stats = nlohmann::json::parse(testing::read_text(only_run_dir(out.path()) / "stats.json"));
    REQUIRE(stats.at("num_simulations") == 2);
    REQUIRE(stats.at("seed") == 7);
    for (const auto& u : stats.at("ucas")) {
        double mean = u.at("mean_rank");
        REQUIRE(mean * 2 == std::floor(mean * 2));
    }
}

TEST_CASE("seed comes from the environment unless the flag is given", "[cli]") {
    testing::TempDir out("cli-env");
    ::setenv("UCA_PRIORITIZER_SEED", "99", 1);
    auto a = invoke(with({"compute", "--out", (out / "a").string(), "--simulations", "3"},
                         dataset_args(testing::evtol_dir())));
    auto b = invoke(with({"compute", "--out", (out / "b").string(), "--simulations", "3", "--seed", "5"},
                         dataset_args(testing::evtol_dir())));
    ::unsetenv("UCA_PRIORITIZER_SEED");
    REQUIRE(a.code == cli::kOk);
    REQUIRE(b.code == cli::kOk);
    auto sa = nlohmann::json::parse(testing::read_text(only_run_dir(out / "a") / "stats.json"));
    auto sb = nlohmann::json::parse(testing::read_text(only_run_dir(out / "b") / "stats.json"));
    REQUIRE(sa.at("seed") == 99);
    REQUIRE(sb.at("seed") == 5);
}

TEST_CASE("zero variation is a usage error", "[cli]") {
    testing::TempDir out("cli-zero");
    auto r = invoke(with({"compute", "--out", out.path().string(), "--variation", "0.0"},
                         dataset_args(testing::evtol_dir())));
    REQUIRE(r.code == cli::kIoOrFormatFailure);
    REQUIRE_THAT(r.err, ContainsSubstring("usage error"));
    REQUIRE(fs::is_empty(out.path()));
}

TEST_CASE("bad flags and formats are usage errors", "[cli]") {
    REQUIRE(invoke({"compute", "--no-such-flag"}).code == cli::kIoOrFormatFailure);
    REQUIRE(invoke({}).code == cli::kIoOrFormatFailure);
    testing::TempDir out("cli-fmt");
    auto r = invoke(with({"compute", "--out", out.path().string(), "--format", "pdf"},
                         dataset_args(testing::evtol_dir())));
    REQUIRE(r.code == cli::kIoOrFormatFailure);
}

TEST_CASE("compute prints the requested format", "[cli]") {
    testing::TempDir out("cli-json");
    auto r = invoke(with({"compute", "--out", out.path().string(), "--simulations", "10", "--format", "json"},
                         dataset_args(testing::evtol_dir())));
    REQUIRE(r.code == cli::kOk);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.at("records").size() == 10);
}

TEST_CASE("given EJ source uses the supplied column", "[cli]") {
    testing::TempDir out("cli-given");
    auto r = invoke(with({"compute", "--out", out.path().string(), "--simulations", "10", "--ej-source", "given",
                          "--format", "csv"},
                         dataset_args(testing::evtol_dir())));
    REQUIRE(r.code == cli::kOk);
    auto records = parse_matrix_csv(r.out);
    REQUIRE(records[0].ej == 59.4072555);
    REQUIRE(records[0].priority == Priority::P1);
}

TEST_CASE("fixed axis flags are recorded in the manifest", "[cli]") {
    testing::TempDir out("cli-fixed");
    auto r = invoke(with({"compute", "--out", out.path().string(), "--simulations", "10", "--fixed-max-sif", "150",
                          "--fixed-max-ej", "12.5"},
                         dataset_args(testing::evtol_dir())));
    REQUIRE(r.code == cli::kOk);
    auto m = nlohmann::json::parse(testing::read_text(only_run_dir(out.path()) / "run-manifest.json"));
    REQUIRE(m.at("fixed_max_sif") == 150);
    REQUIRE(m.at("fixed_max_ej") == 12.5);
    auto matrix = nlohmann::json::parse(testing::read_text(only_run_dir(out.path()) / "matrix.json"));
    REQUIRE(matrix.at("max_sif") == 150);
}

TEST_CASE("a dataset that fails validation makes compute exit 1", "[cli]") {
    testing::TempDir dir("cli-bad");
    testing::copy_evtol(dir.path());
    auto text = testing::read_text(dir / "ucas.csv");
    text.replace(text.find("L4.3;L5.3"), 9, "L9.9");
    testing::write_text(dir / "ucas.csv", text);
    testing::TempDir out("cli-bad-out");
    auto r = invoke(with({"compute", "--out", out.path().string()}, dataset_args(dir.path())));
    REQUIRE(r.code == cli::kValidationFailure);
}

TEST_CASE("report summarizes a results directory", "[cli]") {
    testing::TempDir out("cli-report");
    REQUIRE(invoke(with({"compute", "--out", out.path().string(), "--simulations", "100"},
                        dataset_args(testing::evtol_dir())))
                .code == cli::kOk);
    auto run = only_run_dir(out.path());
    auto r = invoke({"report", "--results", run.string(), "--top", "3"});
    REQUIRE(r.code == cli::kOk);
    REQUIRE_THAT(r.out, ContainsSubstring("total           10"));

    auto top = r.out.substr(r.out.find("Top 3"));
    top = top.substr(0, top.find("\n\n"));
    int rows = 0;
    for (std::size_t p = top.find("\n  UCA-"); p != std::string::npos; p = top.find("\n  UCA-", p + 1)) ++rows;
    REQUIRE(rows == 3);
}

TEST_CASE("report counts sum to the UCA total", "[cli]") {
    testing::TempDir out("cli-counts");
    auto c = invoke(with({"compute", "--out", out.path().string(), "--simulations", "20"},
                         dataset_args(testing::evtol_dir())));
    REQUIRE(c.code == cli::kOk);
    auto records = parse_matrix_csv(testing::read_text(only_run_dir(out.path()) / "matrix.csv"));
    std::map<Priority, int> counts;
    for (const auto& rec : records) ++counts[rec.priority];
    int sum = 0;
    for (const auto& [p, n] : counts) sum += n;
    REQUIRE(sum == 10);
}

TEST_CASE("report shows one rank column per expert", "[cli]") {
    testing::TempDir out("cli-experts");
    REQUIRE(invoke(with({"compute", "--out", out.path().string(), "--simulations", "50"},
                        dataset_args(testing::two_experts_dir())))
                .code == cli::kOk);
    auto r = invoke({"report", "--results", only_run_dir(out.path()).string()});
    REQUIRE(r.code == cli::kOk);
    auto table = r.out.substr(r.out.find("Initial rank per expert"));
    REQUIRE_THAT(table, ContainsSubstring("uca_id      E1  E2  combined  final_rank"));
    REQUIRE_THAT(table, ContainsSubstring("UCA-6.1.1   1   6"));
    REQUIRE_THAT(table, ContainsSubstring("UCA-9.2.1   4   1"));
}

TEST_CASE("report on a missing directory fails cleanly", "[cli]") {
    REQUIRE_THROWS_AS(cli::cmd_report("/nonexistent/run", 5, std::cout), MissingResults);
    REQUIRE(invoke({"report", "--results", "/nonexistent/run"}).code == cli::kIoOrFormatFailure);
}

TEST_CASE("JSON datasets run through the CLI", "[cli]") {
    testing::TempDir dir("cli-jsonds");
    testing::write_text(dir / "dataset.json", dataset_to_json(testing::evtol()).dump(2));
    auto v = invoke({"validate", "--dataset", (dir / "dataset.json").string()});
    REQUIRE(v.code == cli::kOk);
    auto r = invoke({"compute", "--dataset", (dir / "dataset.json").string(), "--out", (dir / "out").string(),
                     "--simulations", "10"});
    REQUIRE(r.code == cli::kOk);
}

TEST_CASE("identical compute runs are byte-identical", "[cli]") {
    testing::TempDir out("cli-det");
    auto args = dataset_args(testing::evtol_dir());
    REQUIRE(invoke(with({"compute", "--out", (out / "a").string()}, args)).code == cli::kOk);
    REQUIRE(invoke(with({"compute", "--out", (out / "b").string(), "--threads", "3"}, args)).code == cli::kOk);
    auto a = only_run_dir(out / "a"), b = only_run_dir(out / "b");
    REQUIRE(a.filename() == b.filename());
    for (const char* f : {"stats.json", "matrix.json", "matrix.csv", "matrix.svg"}) {
        INFO(f);
        REQUIRE(testing::read_text(a / f) == testing::read_text(b / f));
    }
}

TEST_CASE("sha256 of a known string", "[cli]") {
    REQUIRE(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
