// csqar: command-line front end. Worker threads come from CSQAR_THREADS.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "csqar/cli/config.hpp"
#include "csqar/cli/runner.hpp"
#include "csqar/error.hpp"

namespace cli = csqar::cli;

int main(int argc, char** argv) {
    CLI::App app{"Central-spin quantum absorption refrigerator simulator"};
    std::string configPath, mode, output, format;
    bool showVersion = false, printDefault = false;
    app.add_option("config", configPath, "JSON run configuration");
    app.add_option("-m,--mode", mode, "Override mode")
        ->check(CLI::IsMember({"single", "evolve", "optimize", "scaling", "markov", "validate"}));
    app.add_option("-o,--output", output, "Override output path");
    app.add_option("-f,--format", format, "Override output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--version", showVersion, "Print the version");
    app.add_flag("--print-default", printDefault, "Print the default configuration");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitConfig;
    }

    if (showVersion) {
        std::cout << "csqar " << cli::version() << "\n";
        return cli::kExitOk;
    }
    if (printDefault) {
        std::cout << cli::to_json(cli::RunConfig{}).dump(2) << "\n";
        return cli::kExitOk;
    }

    nlohmann::json j = nlohmann::json::object();
    try {
        if (!configPath.empty()) {
            std::ifstream in(configPath);
            if (!in) throw csqar::ConfigError(configPath, "cannot open config file");
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw csqar::ConfigError(configPath, std::string("invalid JSON: ") + e.what());
            }
        }
        if (!j.is_object()) throw csqar::ConfigError("<root>", "expected an object");
        if (!mode.empty()) j["mode"] = mode;
        if (!output.empty()) j["output"]["path"] = output;
        if (!format.empty()) j["output"]["format"] = format;
        const cli::RunConfig config = cli::parse_config(j);
        return cli::run(config, std::cout, std::cerr);
    } catch (const csqar::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cli::kExitConfig;
    }
}
