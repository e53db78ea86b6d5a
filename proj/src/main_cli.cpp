#include "photonlab/cli_io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>

namespace {

int run_command(const std::string& config_path) {
    try {
        const photonlab::Config cfg = photonlab::load_config(config_path);
        const int code = photonlab::execute(cfg);
        if (code == 0)
            std::printf("ok: results written under %s\n",
                        cfg.output.c_str());
        else
            std::fprintf(stderr, "run finished with exit code %d\n", code);
        return code;
    } catch (const photonlab::ConfigError& e) {
        for (const auto& issue : e.issues())
            std::fprintf(stderr, "config error: %s\n", issue.c_str());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

int validate_command(const std::string& config_path) {
    try {
        photonlab::load_config(config_path);
        std::printf("ok: %s is a valid config\n", config_path.c_str());
        return 0;
    } catch (const photonlab::ConfigError& e) {
        for (const auto& issue : e.issues())
            std::fprintf(stderr, "config error: %s\n", issue.c_str());
        return 2;
    }
}

int report_command(const std::string& dir) {
    std::ifstream in(dir + "/summary.json");
    if (!in) {
        std::fprintf(stderr, "error: cannot read %s/summary.json\n",
                     dir.c_str());
        return 3;
    }
    nlohmann::json summary;
    try {
        in >> summary;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: malformed summary.json: %s\n",
                     e.what());
        return 3;
    }
    std::printf("experiment: %s\n",
                summary.value("experiment", std::string("?")).c_str());
    int worst = 0;
    for (const auto& rec : summary.value("records", nlohmann::json::array())) {
        const std::string name = rec.value("name", std::string("?"));
        const std::string eq = rec.value("eq", std::string("?"));
        std::string status = "ok";
        if (name == "error") {
            status = "error: " + rec.value("message", std::string());
            worst = std::max(worst, 3);
        } else if (rec.contains("verdict")) {
            status = rec["verdict"].get<std::string>();
            if (status == "violated") worst = std::max(worst, 4);
        } else if (rec.value("partial", false)) {
            status = "partial: " + rec.value("note", std::string());
        }
        std::printf("  [%s] %s: %s\n", eq.c_str(), name.c_str(),
                    status.c_str());
    }
    const int recorded = summary.value("exit_code", 0);
    return std::max(worst, recorded);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"photonlab: spectral experiments for the half-wave "
                 "Hamiltonian sqrt(-Laplacian) + V"};
    app.require_subcommand(1);

    std::string config_path;
    std::string report_dir;

    CLI::App* run = app.add_subcommand(
        "run", "Run the experiment described by a config file");
    run->add_option("config", config_path, "path to the config file")
        ->required();

    CLI::App* validate = app.add_subcommand(
        "validate", "Check a config file without running anything");
    validate->add_option("config", config_path, "path to the config file")
        ->required();

    CLI::App* report = app.add_subcommand(
        "report", "Summarize the artifacts of a finished run");
    report->add_option("dir", report_dir, "run output directory")
        ->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return run_command(config_path);
    if (validate->parsed()) return validate_command(config_path);
    return report_command(report_dir);
}
