#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "csqar/cli/config.hpp"
#include "csqar/cli/runner.hpp"
#include "csqar/error.hpp"

using namespace csqar;
using namespace csqar::cli;
using nlohmann::json;

namespace {

std::string configPath(const json& j, const std::string& name) {
    const auto path = std::filesystem::temp_directory_path() / ("csqar_test_" + name + ".json");
    std::ofstream(path) << j.dump();
    return path.string();
}

int runTool(const std::string& args) {
    const std::string cmd = std::string(CSQAR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("defaults") {
    const RunConfig c = parse_config(json::object());
    CHECK(c.mode == Mode::Evolve);
    CHECK(c.params.epsilon == std::array<double, 3>{1.0, 2.0, 1.0});
    CHECK(c.params.nBath == std::array<int, 3>{30, 30, 30});
    CHECK(c.params.beta == std::array<double, 3>{1.0, 1.0, 0.5});
    CHECK(c.timeGrid.step == 0.005);
    CHECK(c.timeGrid.grid().count == 2001);
    CHECK(c.pruneTol == 1e-12);
}

TEST_CASE("config round trip") {
    json j = {{"mode", "optimize"},
              {"params", {{"coupling", {0.1, 0.2, 0.3}}, {"nBath", {3, 4, 5}}, {"g", 0.07}}},
              {"optimization", {{"budget", 77}, {"seed", 9}, {"gHigh", 0.2}}},
              {"markov", {{"alpha", {1e-5, 2e-5, 3e-5}}, {"optimize", true}}},
              {"output", {{"format", "json"}, {"path", "out.json"}}}};
    const RunConfig c = parse_config(j);
    CHECK(c.mode == Mode::Optimize);
    CHECK(c.params.nBath == std::array<int, 3>{3, 4, 5});
    CHECK(c.optimization.budget == 77);
    CHECK(c.markov.optimize);
    const json resolved = to_json(c);
    CHECK(to_json(parse_config(resolved)) == resolved);
    CHECK(parse_config(resolved).optimization.ranges.gHigh == 0.2);
}

TEST_CASE("schema errors carry the field path") {
    auto pathOf = [](const json& j) {
        try {
            parse_config(j);
        } catch (const ConfigError& e) {
            return e.path();
        }
        return std::string("<none>");
    };
    CHECK(pathOf({{"mode", "fly"}}) == "mode");
    CHECK(pathOf({{"params", {{"epsilon", {1.0, 2.0}}}}}) == "params.epsilon");
    CHECK(pathOf({{"params", {{"nBath", {1, 0, 1}}}}}) == "params.nBath[1]");
    CHECK(pathOf({{"params", {{"colour", 1}}}}) == "params.colour");
    CHECK(pathOf({{"timeGrid", {{"step", 0.0}}}}) == "timeGrid.step");
    CHECK(pathOf({{"timeGrid", {{"step", "fast"}}}}) == "timeGrid.step");
    CHECK(pathOf({{"optimization", {{"gLow", 0.5}}}}) == "optimization.gLow");
    CHECK(pathOf({{"output", {{"format", "xml"}}}}) == "output.format");
    CHECK(pathOf(json::array()) == "<root>");
}

TEST_CASE("single-star table") {
    RunConfig c;
    c.mode = Mode::Single;
    c.timeGrid = {0.0, 1.0, 0.5};
    const std::string out = execute(c);
    std::istringstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# csqar " + version());
    std::getline(in, line);
    REQUIRE(line.rfind("# config: ", 0) == 0);
    CHECK(parse_config(json::parse(line.substr(10))).mode == Mode::Single);
    std::getline(in, line);
    CHECK(line == "t,T,r,Qdot_S,Qdot_B");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("evolve output is deterministic and re-runnable from its header") {
    RunConfig c;
    c.params.nBath = {4, 4, 4};
    c.timeGrid = {0.0, 2.0, 0.1};
    const std::string a = execute(c);
    const std::string b = execute(c);
    CHECK(a == b);
    std::istringstream in(a);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    const RunConfig again = parse_config(json::parse(line.substr(10)));
    CHECK(execute(again) == a);
    std::getline(in, line);
    CHECK(line == "t,T1,T2,T3,r1,r2,r3,Qdot_S1,Qdot_S2,Qdot_S3,Qdot_B1,Qdot_B2,Qdot_B3");

    c.output.format = OutputFormat::Json;
    const json j = json::parse(execute(c));
    CHECK(j.at("series").at("T1").size() == 21);
    CHECK(j.at("version") == version());
}

TEST_CASE("validate mode") {
    RunConfig c;
    c.mode = Mode::Validate;
    c.params.nBath = {1, 1, 1};
    c.single.nBath = 3;
    const json j = json::parse(execute(c));
    CHECK(j.at("pass").get<bool>());
    CHECK(j.at("maxDeviation").get<double>() < kValidateTolerance);
}

TEST_CASE("markov series") {
    RunConfig c;
    c.mode = Mode::Markov;
    c.timeGrid = {0.0, 20.0, 1.0};
    const std::string out = execute(c);
    CHECK(out.find("t,T1,T2,T3,r1,r2,r3,Qdot_S1,Qdot_S2,Qdot_S3") != std::string::npos);
}

TEST_CASE("couplings from an optimize report") {
    const json report = {{"result", {{"coupling", {0.9, 0.8, 0.7}}, {"g", 0.03}}}};
    RunConfig c;
    c.couplingsFrom = configPath(report, "report");
    const RunConfig r = resolve(c);
    CHECK(r.params.coupling == std::array<double, 3>{0.9, 0.8, 0.7});
    CHECK(r.params.g == 0.03);
    CHECK(r.couplingsFrom.empty());
    c.couplingsFrom = configPath(json{{"nothing", 1}}, "bad_report");
    CHECK_THROWS_AS(resolve(c), ConfigError);
}

TEST_CASE("exit codes") {
    std::ostringstream out, err;
    RunConfig c;
    c.mode = Mode::Single;
    c.single.nBath = 0;
    CHECK(run(c, out, err) == kExitNumerical);
    CHECK(err.str().find("nBath") != std::string::npos);

    c.mode = Mode::Validate;
    c.params.nBath = {12, 12, 12};
    c.single.nBath = 2;
    CHECK(run(c, out, err) == kExitNumerical);

    CHECK(runTool("--version") == 0);
    CHECK(runTool(configPath(json{{"mode", "single"}, {"timeGrid", {{"stop", 0.1}}}}, "ok")) == 0);
    CHECK(runTool(configPath(json{{"mystery", 1}}, "unknown")) == 1);
    CHECK(runTool("/nonexistent/config.json") == 1);
    CHECK(runTool(configPath(json{{"mode", "markov"}, {"markov", {{"alpha", {0.1, 0.1, 0.1}}}}}, "strong")) == 2);
}

TEST_CASE("output file and overrides") {
    const auto dir = std::filesystem::temp_directory_path();
    const std::string outPath = (dir / "csqar_test_out.csv").string();
    std::remove(outPath.c_str());
    const std::string cfg = configPath(json{{"mode", "single"}, {"timeGrid", {{"stop", 0.2}, {"step", 0.1}}}}, "file");
    CHECK(runTool(cfg + " --output " + outPath) == 0);
    const std::string first = readFile(outPath);
    CHECK(first.find("t,T,r,Qdot_S,Qdot_B") != std::string::npos);
    CHECK(runTool(cfg + " --output " + outPath) == 0);
    CHECK(readFile(outPath) == first);
    CHECK(runTool(cfg + " --format json --output " + outPath) == 0);
    CHECK(json::parse(readFile(outPath)).at("columns").size() == 5);
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) CHECK(std::stod(format_number(v)) == v);
    CHECK(format_number(-0.0) == "0");
}

} // TEST_SUITE
