#include "ccm/app/bench.hpp"
#include "ccm/app/commands.hpp"
#include "ccm/app/io.hpp"
#include "ccm/app/plot.hpp"
#include "ccm/app/report.hpp"
#include "ccm/error.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <sstream>

using namespace ccm;
using namespace ccm::app;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("ccm_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                 "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::InvalidArgument;
}

fs::path write_logistic_csv(const fs::path& dir, std::size_t n) {
    const auto [x, y] = generate_coupled_logistic(std::max<std::size_t>(n, 100), 0.1, 0.0, 4);
    std::ostringstream out;
    out << "t,x,y\n";
    for (std::size_t i = 0; i < n; ++i) {
        out << i << ',' << format_double(x[i]) << ',' << format_double(y[i]) << '\n';
    }
    const auto path = dir / "pair.csv";
    write_file(path, out.str());
    return path;
}

int cli(std::vector<std::string> args, std::string* err_text = nullptr) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    if (err_text != nullptr) {
        *err_text = err.str();
    }
    return code;
}

}  // namespace

TEST(ParseCsv, ReadsNamedColumns) {
    const auto [x, y] = parse_csv("a, b ,c\n1,2,3\n\n4,5,6\n", "c", "a");
    EXPECT_EQ(std::vector<double>(x.values().begin(), x.values().end()), (std::vector<double>{3, 6}));
    EXPECT_EQ(std::vector<double>(y.values().begin(), y.values().end()), (std::vector<double>{1, 4}));
    EXPECT_EQ(x.name(), "c");
}

TEST(ParseCsv, QuotedHeaderAndCrlf) {
    const auto [x, y] = parse_csv("\"x\",\"y\"\r\n1.5,-2e3\r\n+3,0\r\n", "x", "y");
    EXPECT_EQ(x[0], 1.5);
    EXPECT_EQ(y[0], -2000.0);
    EXPECT_EQ(x[1], 3.0);
}

TEST(ParseCsv, Errors) {
    try {
        parse_csv("x,y\n1,2\n3,0e\n", "x", "y");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 3u);
        EXPECT_EQ(e.column(), 2u);
    }
    try {
        parse_csv("x,y\n1,2\n", "x", "z");
        FAIL();
    } catch (const MissingColumn& e) {
        EXPECT_EQ(e.column(), "z");
    }
    EXPECT_EQ(code_of([] { parse_csv("x,y\n1,2\n3\n", "x", "y"); }), Errc::RaggedRows);
    EXPECT_EQ(code_of([] { parse_csv("x,y\n1,2\n", "x", "y"); }), Errc::TooShort);
    EXPECT_EQ(code_of([] { parse_csv("x,y\n1,2\nnan,3\n", "x", "y"); }), Errc::NonFiniteValue);
    EXPECT_EQ(code_of([] { parse_csv("x,y\n1,2\n1e400,3\n", "x", "y"); }), Errc::ParseError);
    EXPECT_EQ(code_of([] { parse_csv("", "x", "y"); }), Errc::ParseError);
    EXPECT_EQ(code_of([] { ingest_csv("/nonexistent/pair.csv", "x", "y"); }), Errc::IoError);
}

TEST(SkillsCsv, RoundTripIsBitExact) {
    const std::vector<SkillRecord> records{
        {Direction::XFromMY, 2, 1, 100, 0, 0.1 + 0.2, false},
        {Direction::YFromMX, 4, 2, 400, 9, -1.0 / 3.0, false},
        {Direction::YFromMX, 1, 1, 10, 1, 0.0, true},
    };
    std::ostringstream out;
    write_skills_csv(out, records);
    EXPECT_EQ(out.str().substr(0, kSkillsHeader.size()), kSkillsHeader);
    EXPECT_EQ(parse_skills_csv(out.str()), records);
}

TEST(SkillsCsv, Malformed) {
    EXPECT_EQ(code_of([] { parse_skills_csv(""); }), Errc::MalformedSkillsFile);
    EXPECT_EQ(code_of([] { parse_skills_csv(std::string(kSkillsHeader) + "\n"); }),
              Errc::MalformedSkillsFile);
    EXPECT_EQ(code_of([] { parse_skills_csv("a,b\n1,2\n"); }), Errc::MalformedSkillsFile);
    EXPECT_EQ(code_of([] {
                  parse_skills_csv(std::string(kSkillsHeader) + "\nX_from_MY,2,1,100,0,1.5,0\n");
              }),
              Errc::MalformedSkillsFile);
    EXPECT_EQ(code_of([] {
                  parse_skills_csv(std::string(kSkillsHeader) + "\nsideways,2,1,100,0,0.5,0\n");
              }),
              Errc::MalformedSkillsFile);
}

TEST(Digest, KnownVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ConvergenceJson, NullVerdictForSingleL) {
    const std::vector<SkillRecord> records{{Direction::XFromMY, 2, 1, 100, 0, 0.5, false}};
    const auto doc = convergence_json(records, 0.1);
    ASSERT_EQ(doc["cells"].size(), 1u);
    EXPECT_TRUE(doc["cells"][0]["converged"].is_null());
    EXPECT_EQ(doc["schema"], kSchemaVersion);
}

TEST(Bench, ScaledBaseline) {
    const auto full = scaled_baseline(1.0);
    EXPECT_EQ(full.replicates, 500u);
    EXPECT_EQ(full.library_sizes, (std::vector<std::size_t>{500, 1000, 2000}));
    EXPECT_EQ(full.embedding_dims, (std::vector<int>{1, 2, 4}));
    EXPECT_EQ(scaled_length(1.0), 4000u);
    const auto half = scaled_baseline(0.5);
    EXPECT_EQ(half.replicates, 250u);
    EXPECT_EQ(half.library_sizes, (std::vector<std::size_t>{250, 500, 1000}));
    EXPECT_EQ(scaled_length(0.5), 2000u);
}

TEST(Bench, UnknownScenario) {
    BenchOptions o;
    o.scenario = "sideways";
    EXPECT_EQ(code_of([&] { run_bench(o); }), Errc::UnknownScenario);
    EXPECT_EQ(cli({"bench", "--scenario", "sideways"}), kExitConfig);
}

TEST(Bench, TinyModesReport) {
    BenchOptions o;
    o.scenario = "modes";
    o.scale = 0.05;
    o.repeats = 1;
    o.replicates = 2;
    const auto report = run_bench(o);
    EXPECT_EQ(report.points.size(), 4u);
    EXPECT_NE(report.ratio("indexed/parallel"), nullptr);
    const auto doc = to_json(report);
    EXPECT_EQ(doc["points"].size(), 4u);
}

TEST(Cli, RunWritesArtifactsDeterministically) {
    TempDir dir;
    const auto input = write_logistic_csv(dir.path(), 300);
    auto run = [&](const std::string& out, const std::string& mode, const std::string& workers) {
        return cli({"run", "--input", input.string(), "--x", "x", "--y", "y", "--E", "2", "--tau",
                    "1,2", "--L", "20,100", "--r", "5", "--mode", mode, "--workers", workers,
                    "--out", (dir.path() / out).string()});
    };
    ASSERT_EQ(run("a", "indexed-async", "2"), kExitOk);
    ASSERT_EQ(run("b", "naive", "1"), kExitOk);
    const auto skills_a = read_file(dir.path() / "a" / "skills.csv");
    EXPECT_EQ(skills_a, read_file(dir.path() / "b" / "skills.csv"));
    EXPECT_EQ(read_skills_csv(dir.path() / "a" / "skills.csv").size(), 2u * 2u * 2u * 5u);

    const auto manifest = nlohmann::json::parse(read_file(dir.path() / "a" / "manifest.json"));
    EXPECT_EQ(manifest["status"], "completed");
    EXPECT_EQ(manifest["inputs"][0]["sha256"], file_sha256(input));
    EXPECT_EQ(manifest["config"]["seed"], 42);
    const auto summary = nlohmann::json::parse(read_file(dir.path() / "a" / "convergence.json"));
    EXPECT_EQ(summary["cells"].size(), 4u);

    EXPECT_EQ(cli({"plot", "--skills", (dir.path() / "a" / "skills.csv").string(), "--out",
                   (dir.path() / "plot.svg").string()}),
              kExitOk);
    const auto svg = read_file(dir.path() / "plot.svg");
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("X_from_MY"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir.path() / "plot.csv"));
}

TEST(Cli, ExitCodes) {
    TempDir dir;
    const auto input = write_logistic_csv(dir.path(), 50);
    std::string err;
    // N = 50, E = 4, tau = 4 leaves M = 38 points: L = 10 fits, L = 40 does not.
    EXPECT_EQ(cli({"run", "--input", input.string(), "--x", "x", "--y", "y", "--L", "10", "--E",
                   "4", "--tau", "4", "--r", "2", "--out", (dir.path() / "o").string()}),
              kExitOk);
    EXPECT_EQ(cli({"run", "--input", input.string(), "--x", "x", "--y", "y", "--L", "40", "--E",
                   "4", "--tau", "4", "--out", (dir.path() / "o").string()},
                  &err),
              kExitConfig);
    EXPECT_NE(err.find("ConfigInvalid"), std::string::npos) << err;
    EXPECT_NE(err.find("M = 38"), std::string::npos) << err;
    EXPECT_EQ(cli({"run", "--input", (dir.path() / "missing.csv").string(), "--x", "x", "--y", "y",
                   "--L", "10"}),
              kExitIo);
    EXPECT_EQ(cli({"run", "--input", input.string(), "--x", "x", "--y", "nope", "--L", "10"}),
              kExitConfig);
    EXPECT_EQ(cli({"run", "--input", input.string(), "--x", "x"}), kExitConfig);
    EXPECT_EQ(cli({"run", "--input", input.string(), "--x", "x", "--y", "y", "--L", "10",
                   "--mode", "turbo"}),
              kExitConfig);
    write_file(dir.path() / "empty.csv", "");
    EXPECT_EQ(cli({"plot", "--skills", (dir.path() / "empty.csv").string(), "--out",
                   (dir.path() / "p.svg").string()}),
              kExitIo);
    EXPECT_EQ(cli({"frobnicate"}), kExitConfig);
    EXPECT_EQ(cli({}), kExitConfig);
    EXPECT_EQ(cli({"--help"}), kExitOk);
}
