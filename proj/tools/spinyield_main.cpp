// spinyield_main.cpp: the spinyield command-line tool. Thin plumbing only;
// everything with physics in it lives in the library headers.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include <spinyield/emit.hpp>
#include <spinyield/scenario.hpp>

namespace {

namespace scenario = spinyield::scenario;
namespace emit = spinyield::emit;

// --jobs beats SPINYIELD_JOBS beats whatever the machine reports.
int resolve_jobs(int flag_jobs) {
    if (flag_jobs > 0) return flag_jobs;
    if (const char* env = std::getenv("SPINYIELD_JOBS")) {
        char* end = nullptr;
        long n = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || n < 1)
            throw scenario::ConfigError(
                std::string("SPINYIELD_JOBS: expected a positive integer, got '") + env +
                "'");
        return static_cast<int>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw scenario::ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw emit::IoError("cannot create output directory '" + dir +
                            "': " + ec.message());
}

scenario::Route route_from_flag(const std::string& word) {
    if (word == "auto") return scenario::Route::auto_pick;
    if (word == "spectral") return scenario::Route::spectral;
    if (word == "quadrature") return scenario::Route::quadrature;
    if (word == "resolvent") return scenario::Route::resolvent;
    throw scenario::ConfigError("--route: unknown value '" + word +
                                "' (accepted: auto, spectral, quadrature, resolvent)");
}

void run_and_emit(const scenario::ScenarioConfig& cfg, const std::string& out_dir,
                  int jobs) {
    scenario::ResultTable table = scenario::run_scenario(cfg, jobs);
    std::string stem = out_dir + "/" + table.label;
    emit::write_text(stem + ".csv", emit::csv_text(table));
    emit::write_text(stem + ".svg", emit::svg_text(table));
    std::fprintf(stderr, "%s: %zu angles, %.2fs wall\n", table.label.c_str(),
                 table.rows.size(), table.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spinyield: singlet-yield compass sweeps for radical pairs"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string route_flag;
    int jobs_flag = 0;
    std::string preset_name;

    CLI::App* run = app.add_subcommand("run", "run one config file");
    run->add_option("--config", config_path, "config file (schema 1)")->required();
    run->add_option("--out", out_dir, "output directory (default .)");
    run->add_option("--route", route_flag,
                    "override the route: spectral, quadrature, resolvent, auto");
    run->add_option("--jobs", jobs_flag,
                    "worker threads (default SPINYIELD_JOBS, then hardware)");

    CLI::App* pre = app.add_subcommand("preset", "run a named figure preset");
    pre->add_option("name", preset_name, "preset name; see list-presets")->required();
    pre->add_option("--out", out_dir, "output directory (default .)");
    pre->add_option("--jobs", jobs_flag, "worker threads");

    CLI::App* list = app.add_subcommand("list-presets", "print the preset names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits clean, bad flags are config errors
    }

    try {
        if (list->parsed()) {
            for (const std::string& name : scenario::preset_names())
                std::printf("%s\n", name.c_str());
            return 0;
        }
        int jobs = resolve_jobs(jobs_flag);
        if (run->parsed()) {
            std::string stem = std::filesystem::path(config_path).stem().string();
            scenario::ScenarioConfig cfg =
                scenario::parse_config(read_file(config_path), stem.empty() ? "run" : stem);
            if (!route_flag.empty()) {
                cfg.route = route_from_flag(route_flag);
                cfg.validate();
            }
            ensure_dir(out_dir);
            run_and_emit(cfg, out_dir, jobs);
            return 0;
        }
        ensure_dir(out_dir);
        for (const scenario::ScenarioConfig& cfg : scenario::preset(preset_name))
            run_and_emit(cfg, out_dir, jobs);
        return 0;
    } catch (const scenario::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const emit::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 4;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::bad_alloc&) {
        std::fprintf(stderr, "numeric error: out of memory\n");
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    }
}
