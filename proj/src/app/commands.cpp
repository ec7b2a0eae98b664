#include "ccm/app/commands.hpp"

#include "ccm/app/bench.hpp"
#include "ccm/app/io.hpp"
#include "ccm/app/plot.hpp"
#include "ccm/app/report.hpp"
#include "ccm/engine.hpp"
#include "ccm/error.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

namespace ccm::app {

namespace fs = std::filesystem;

namespace {

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::IoError:
        case Errc::ParseError:
        case Errc::RaggedRows:
        case Errc::NonFiniteValue:
        case Errc::TooShort:
        case Errc::MalformedSkillsFile:
            return kExitIo;
        default:
            return kExitConfig;
    }
}

/// Parses args with CLI11; returns an exit code when the command should stop.
std::optional<int> parse(CLI::App& app, const std::vector<std::string>& args, std::ostream& out,
                         std::ostream& err) {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return std::nullopt;
}

template <typename T>
std::vector<T> as_grid(const std::string& flag, const std::string& text) {
    std::vector<T> grid;
    for (const long long v : parse_int_list(text)) {
        if (v < 1) {
            throw Error(Errc::ConfigInvalid, flag + " values must be positive");
        }
        grid.push_back(static_cast<T>(v));
    }
    return grid;
}

std::vector<Strategy> parse_modes(const std::string& text) {
    std::vector<Strategy> modes;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string::npos) {
            comma = text.size();
        }
        modes.push_back(parse_strategy(text.substr(start, comma - start)));
        start = comma + 1;
    }
    return modes;
}

}  // namespace

int cmd_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Run a CCM parameter sweep over two columns of a CSV file", "ccm run"};
    std::string input;
    std::string column_x;
    std::string column_y;
    std::string e_grid = "1,2,4";
    std::string tau_grid = "1,2,4";
    std::string l_grid;
    std::size_t replicates = 100;
    std::uint64_t seed = 42;
    std::string mode = "indexed-async";
    std::size_t workers = 1;
    std::size_t in_flight = 2;
    std::string directions = "both";
    double min_delta = 0.1;
    std::string out_dir = ".";

    app.add_option("--input", input, "CSV file with a header row")->required();
    app.add_option("--x", column_x, "column holding series X")->required();
    app.add_option("--y", column_y, "column holding series Y")->required();
    app.add_option("--E", e_grid, "embedding dimensions, comma-separated")->capture_default_str();
    app.add_option("--tau", tau_grid, "embedding delays, comma-separated")->capture_default_str();
    app.add_option("--L", l_grid, "library sizes, comma-separated")->required();
    app.add_option("--r", replicates, "random libraries per (E, tau, L)")->capture_default_str();
    app.add_option("--seed", seed, "master seed")->capture_default_str();
    app.add_option("--mode", mode, "naive | parallel | indexed | indexed-async")
        ->capture_default_str();
    app.add_option("--workers", workers, "worker threads")->capture_default_str()->check(
        CLI::PositiveNumber);
    app.add_option("--pipelines-in-flight", in_flight, "concurrent pipelines (indexed-async)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--directions", directions, "both | X_from_MY | Y_from_MX")
        ->capture_default_str();
    app.add_option("--min-delta", min_delta, "convergence threshold on delta rho")
        ->capture_default_str();
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    if (auto code = parse(app, args, out, err)) {
        return *code;
    }

    RunManifest manifest;
    manifest.column_x = column_x;
    manifest.column_y = column_y;
    fs::path out_path(out_dir);
    try {
        SweepConfig config;
        config.embedding_dims = as_grid<int>("--E", e_grid);
        config.delays = as_grid<int>("--tau", tau_grid);
        config.library_sizes = as_grid<std::size_t>("--L", l_grid);
        config.replicates = replicates;
        config.seed = seed;
        config.mode.strategy = parse_strategy(mode);
        config.mode.workers = workers;
        config.mode.pipelines_in_flight = in_flight;
        if (directions != "both") {
            config.directions = {parse_direction(directions)};
        }
        manifest.config = config;

        const auto [x, y] = ingest_csv(input, column_x, column_y);
        manifest.series_length = x.size();
        manifest.inputs.push_back({input, file_sha256(input), fs::file_size(input)});
        validate_config(config, x.size());

        std::error_code ec;
        fs::create_directories(out_path, ec);
        if (ec) {
            throw Error(Errc::IoError, "cannot create '" + out_dir + "': " + ec.message());
        }

        try {
            const auto result = run_sweep(x, y, config);
            manifest.metrics = result.metrics;
            write_skills_csv(out_path / "skills.csv", result.records);
            write_file(out_path / "convergence.json",
                       convergence_json(result.records, min_delta).dump(2) + "\n");
        } catch (const Error& e) {
            manifest.status = "failed: " + std::string(e.what());
            write_file(out_path / "manifest.json", to_json(manifest).dump(2) + "\n");
            throw;
        }
        write_file(out_path / "manifest.json", to_json(manifest).dump(2) + "\n");
        out << "wrote " << config.expected_records() << " skill records to "
            << (out_path / "skills.csv").string() << '\n';
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

int cmd_bench(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time the implementation levels on the baseline scenario", "ccm bench"};
    BenchOptions options;
    std::string modes;
    std::string values;
    std::optional<std::size_t> replicates;
    std::optional<std::size_t> length;
    std::string report_path;
    app.add_option("--scenario", options.scenario,
                   "baseline | modes | elasticity-L | elasticity-E | elasticity-tau")
        ->capture_default_str();
    app.add_option("--scale", options.scale, "shrinks N, r and the L grid")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--workers", options.workers, "worker threads")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--repeats", options.repeats, "runs per measurement")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--pipelines-in-flight", options.pipelines_in_flight,
                   "concurrent pipelines (indexed-async)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", options.seed, "master seed")->capture_default_str();
    app.add_option("--modes", modes, "comma-separated modes (default depends on scenario)");
    app.add_option("--values", values, "subset of the varied parameter's values");
    app.add_option("--r", replicates, "replicates, overriding the scaled value");
    app.add_option("--n", length, "series length, overriding the scaled value");
    app.add_option("--out", report_path, "write the JSON report here instead of stdout");
    if (auto code = parse(app, args, out, err)) {
        return *code;
    }

    try {
        if (!modes.empty()) {
            options.modes = parse_modes(modes);
        }
        if (!values.empty()) {
            options.values = parse_int_list(values);
        }
        options.replicates = replicates;
        options.series_length = length;
        const auto report = run_bench(options);
        const auto text = to_json(report).dump(2) + "\n";
        if (report_path.empty()) {
            out << text;
        } else {
            write_file(report_path, text);
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    }
}

int cmd_plot(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Plot mean skill against library size from a skills CSV", "ccm plot"};
    std::string skills;
    std::string target;
    app.add_option("--skills", skills, "skills CSV written by `ccm run`")->required();
    app.add_option("--out", target, "SVG output path")->required();
    if (auto code = parse(app, args, out, err)) {
        return *code;
    }
    try {
        const auto written = emit_plot(skills, target);
        out << "wrote " << written.svg.string() << " and " << written.aggregates.string() << '\n';
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    static constexpr const char* kUsage =
        "usage: ccm <command> [options]\n"
        "\n"
        "commands:\n"
        "  run     sweep (E, tau, L) over a CSV pair and write skills, summary, manifest\n"
        "  bench   time the execution modes on the synthetic baseline\n"
        "  plot    render a skills CSV as an SVG convergence plot\n"
        "\n"
        "`ccm <command> --help` lists the options of each command.\n";
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        (args.empty() ? err : out) << kUsage;
        return args.empty() ? kExitConfig : kExitOk;
    }
    const std::vector<std::string> rest(args.begin() + 1, args.end());
    if (args[0] == "run") {
        return cmd_run(rest, out, err);
    }
    if (args[0] == "bench") {
        return cmd_bench(rest, out, err);
    }
    if (args[0] == "plot") {
        return cmd_plot(rest, out, err);
    }
    err << "error: unknown command '" << args[0] << "'\n" << kUsage;
    return kExitConfig;
}

}  // namespace ccm::app
