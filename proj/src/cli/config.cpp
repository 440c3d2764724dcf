#include "csqar/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "csqar/error.hpp"

namespace csqar::cli {

using nlohmann::json;

std::string to_string(Mode m) {
    switch (m) {
    case Mode::Single: return "single";
    case Mode::Evolve: return "evolve";
    case Mode::Optimize: return "optimize";
    case Mode::Scaling: return "scaling";
    case Mode::Markov: return "markov";
    case Mode::Validate: return "validate";
    }
    return "?";
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

kernels::UniformGrid TimeGridConfig::grid() const {
    return {start, step, static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1};
}

namespace {

// Walks one JSON object, remembering which keys were consumed.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(display(), "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    std::optional<Reader> child(const std::string& key) {
        if (!take(key)) return std::nullopt;
        return Reader(j_.at(key), sub(key));
    }

    void number(const std::string& key, double& out) {
        if (take(key)) out = toNumber(j_.at(key), sub(key));
    }

    template <typename Int>
    void integer(const std::string& key, Int& out, long long minimum) {
        if (take(key)) out = static_cast<Int>(toInteger(j_.at(key), sub(key), minimum));
    }

    void boolean(const std::string& key, bool& out) {
        if (!take(key)) return;
        if (!j_.at(key).is_boolean()) throw ConfigError(sub(key), "expected true or false");
        out = j_.at(key).get<bool>();
    }

    void string(const std::string& key, std::string& out) {
        if (!take(key)) return;
        if (!j_.at(key).is_string()) throw ConfigError(sub(key), "expected a string");
        out = j_.at(key).get<std::string>();
    }

    void numbers3(const std::string& key, std::array<double, 3>& out) {
        if (!take(key)) return;
        const json& a = j_.at(key);
        if (!a.is_array() || a.size() != 3) throw ConfigError(sub(key), "expected 3 numbers");
        for (std::size_t i = 0; i < 3; ++i) out[i] = toNumber(a[i], indexed(key, i));
    }

    void integers3(const std::string& key, std::array<int, 3>& out, long long minimum) {
        if (!take(key)) return;
        const json& a = j_.at(key);
        if (!a.is_array() || a.size() != 3) throw ConfigError(sub(key), "expected 3 integers");
        for (std::size_t i = 0; i < 3; ++i)
            out[i] = static_cast<int>(toInteger(a[i], indexed(key, i), minimum));
    }

    void integerList(const std::string& key, std::vector<int>& out, long long minimum) {
        if (!take(key)) return;
        const json& a = j_.at(key);
        if (!a.is_array() || a.empty()) throw ConfigError(sub(key), "expected a non-empty list");
        out.clear();
        for (std::size_t i = 0; i < a.size(); ++i)
            out.push_back(static_cast<int>(toInteger(a[i], indexed(key, i), minimum)));
    }

    /// Rejects keys that were never read.
    void finish() const {
        for (const auto& item : j_.items())
            if (!seen_.count(item.key())) throw ConfigError(sub(item.key()), "unknown field");
    }

    std::string sub(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

private:
    bool take(const std::string& key) {
        if (!j_.contains(key)) return false;
        seen_.insert(key);
        return true;
    }
    std::string display() const { return path_.empty() ? "<root>" : path_; }
    std::string indexed(const std::string& key, std::size_t i) const {
        return sub(key) + "[" + std::to_string(i) + "]";
    }
    static double toNumber(const json& v, const std::string& path) {
        if (!v.is_number()) throw ConfigError(path, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
        return x;
    }
    static long long toInteger(const json& v, const std::string& path, long long minimum) {
        if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
        const long long x = v.get<long long>();
        if (x < minimum) throw ConfigError(path, "must be >= " + std::to_string(minimum));
        return x;
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

Mode parseMode(const std::string& s, const std::string& path) {
    for (Mode m : {Mode::Single, Mode::Evolve, Mode::Optimize, Mode::Scaling, Mode::Markov,
                   Mode::Validate})
        if (to_string(m) == s) return m;
    throw ConfigError(path, "unknown mode '" + s +
                                "' (single, evolve, optimize, scaling, markov, validate)");
}

void checkPositive(double v, const std::string& path) {
    if (!(v > 0.0)) throw ConfigError(path, "must be > 0");
}

void checkRange(double lo, double hi, const std::string& path) {
    if (lo > hi) throw ConfigError(path, "lower bound exceeds upper bound");
}

} // namespace

RunConfig parse_config(const json& j) {
    RunConfig c;
    Reader root(j, "");
    std::string mode = to_string(c.mode);
    root.string("mode", mode);
    c.mode = parseMode(mode, "mode");

    if (auto r = root.child("params")) {
        r->numbers3("epsilon", c.params.epsilon);
        r->numbers3("bathEnergy", c.params.bathEnergy);
        r->numbers3("coupling", c.params.coupling);
        r->number("g", c.params.g);
        r->integers3("nBath", c.params.nBath, 1);
        r->numbers3("beta", c.params.beta);
        r->string("couplingsFrom", c.couplingsFrom);
        r->finish();
    }

    if (auto r = root.child("single")) {
        r->number("epsilon", c.single.epsilon);
        r->number("bathEnergy", c.single.bathEnergy);
        r->number("coupling", c.single.coupling);
        r->integer("nBath", c.single.nBath, 1);
        r->number("beta", c.single.beta);
        r->finish();
    }

    if (auto r = root.child("timeGrid")) {
        r->number("start", c.timeGrid.start);
        r->number("stop", c.timeGrid.stop);
        r->number("step", c.timeGrid.step);
        r->finish();
    }
    checkPositive(c.timeGrid.step, "timeGrid.step");
    if (c.timeGrid.start < 0.0) throw ConfigError("timeGrid.start", "must be >= 0");
    if (c.timeGrid.stop < c.timeGrid.start)
        throw ConfigError("timeGrid.stop", "must not be before timeGrid.start");

    if (auto r = root.child("optimization")) {
        auto& o = c.optimization;
        r->numbers3("couplingLow", o.ranges.couplingLow);
        r->numbers3("couplingHigh", o.ranges.couplingHigh);
        r->number("gLow", o.ranges.gLow);
        r->number("gHigh", o.ranges.gHigh);
        r->number("tMax", o.ranges.scan.tMax);
        r->number("scanStep", o.ranges.scan.step);
        r->integer("budget", o.budget, 1);
        r->integer("starts", o.starts, 1);
        r->integer("seed", o.seed, 0);
        r->finish();
    }
    {
        const auto& o = c.optimization;
        for (int i = 0; i < 3; ++i) {
            checkRange(o.ranges.couplingLow[i], o.ranges.couplingHigh[i],
                       "optimization.couplingLow[" + std::to_string(i) + "]");
            if (o.ranges.couplingLow[i] < 0.0)
                throw ConfigError("optimization.couplingLow[" + std::to_string(i) + "]",
                                  "must be >= 0");
        }
        checkRange(o.ranges.gLow, o.ranges.gHigh, "optimization.gLow");
        if (o.ranges.gLow < 0.0) throw ConfigError("optimization.gLow", "must be >= 0");
        checkPositive(o.ranges.scan.step, "optimization.scanStep");
        if (o.ranges.scan.tMax < 0.0) throw ConfigError("optimization.tMax", "must be >= 0");
    }

    if (auto r = root.child("scaling")) {
        r->integerList("nList", c.scaling.nList, 1);
        r->integer("budget", c.scaling.budget, 1);
        r->integerList("nevilleN", c.scaling.nevilleN, 1);
        r->finish();
    }

    if (auto r = root.child("markov")) {
        auto& m = c.markov;
        r->numbers3("epsilon", m.params.epsilon);
        r->number("g", m.params.g);
        r->numbers3("alpha", m.params.alpha);
        r->number("cutoff", m.params.cutoff);
        r->numbers3("beta", m.params.beta);
        r->boolean("optimize", m.optimize);
        r->numbers3("alphaLow", m.ranges.alphaLow);
        r->numbers3("alphaHigh", m.ranges.alphaHigh);
        r->number("gLow", m.ranges.gLow);
        r->number("gHigh", m.ranges.gHigh);
        r->number("tMax", m.ranges.tMax);
        r->number("scanStep", m.ranges.scanStep);
        r->integer("budget", m.budget, 1);
        r->finish();
    }
    for (int i = 0; i < 3; ++i)
        checkRange(c.markov.ranges.alphaLow[i], c.markov.ranges.alphaHigh[i],
                   "markov.alphaLow[" + std::to_string(i) + "]");
    checkRange(c.markov.ranges.gLow, c.markov.ranges.gHigh, "markov.gLow");
    checkPositive(c.markov.ranges.tMax, "markov.tMax");
    checkPositive(c.markov.ranges.scanStep, "markov.scanStep");

    root.number("pruneTol", c.pruneTol);
    if (!(c.pruneTol >= 0.0 && c.pruneTol < 1.0)) throw ConfigError("pruneTol", "must lie in [0, 1)");

    if (auto r = root.child("output")) {
        r->string("path", c.output.path);
        std::string format = to_string(c.output.format);
        r->string("format", format);
        if (format == "csv") c.output.format = OutputFormat::Csv;
        else if (format == "json") c.output.format = OutputFormat::Json;
        else throw ConfigError("output.format", "expected 'csv' or 'json'");
        r->finish();
    }
    root.finish();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig& c) {
    json j;
    j["mode"] = to_string(c.mode);
    j["params"] = {{"epsilon", c.params.epsilon},       {"bathEnergy", c.params.bathEnergy},
                   {"coupling", c.params.coupling},     {"g", c.params.g},
                   {"nBath", c.params.nBath},           {"beta", c.params.beta}};
    if (!c.couplingsFrom.empty()) j["params"]["couplingsFrom"] = c.couplingsFrom;
    j["single"] = {{"epsilon", c.single.epsilon}, {"bathEnergy", c.single.bathEnergy},
                   {"coupling", c.single.coupling}, {"nBath", c.single.nBath},
                   {"beta", c.single.beta}};
    j["timeGrid"] = {{"start", c.timeGrid.start}, {"stop", c.timeGrid.stop},
                     {"step", c.timeGrid.step}};
    const auto& o = c.optimization;
    j["optimization"] = {{"couplingLow", o.ranges.couplingLow},
                         {"couplingHigh", o.ranges.couplingHigh},
                         {"gLow", o.ranges.gLow},
                         {"gHigh", o.ranges.gHigh},
                         {"tMax", o.ranges.scan.tMax},
                         {"scanStep", o.ranges.scan.step},
                         {"budget", o.budget},
                         {"starts", o.starts},
                         {"seed", o.seed}};
    j["scaling"] = {{"nList", c.scaling.nList},
                    {"budget", c.scaling.budget},
                    {"nevilleN", c.scaling.nevilleN}};
    const auto& m = c.markov;
    j["markov"] = {{"epsilon", m.params.epsilon}, {"g", m.params.g},
                   {"alpha", m.params.alpha},     {"cutoff", m.params.cutoff},
                   {"beta", m.params.beta},       {"optimize", m.optimize},
                   {"alphaLow", m.ranges.alphaLow}, {"alphaHigh", m.ranges.alphaHigh},
                   {"gLow", m.ranges.gLow},       {"gHigh", m.ranges.gHigh},
                   {"tMax", m.ranges.tMax},       {"scanStep", m.ranges.scanStep},
                   {"budget", m.budget}};
    j["pruneTol"] = c.pruneTol;
    j["output"] = {{"path", c.output.path}, {"format", to_string(c.output.format)}};
    return j;
}

} // namespace csqar::cli
