#include "qgt/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qgt {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, Entry>;

class ConfigReader {
  public:
    ConfigReader(const std::string& text, std::string name) : name_(std::move(name)) {
        std::istringstream in(text);
        std::string line;
        std::string section;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string stripped = trim(line.substr(0, line.find('#')));
            if (stripped.empty())
                continue;
            if (stripped.front() == '[') {
                if (stripped.back() != ']')
                    fail(line_no, "malformed section header '" + stripped + "'");
                section = trim(stripped.substr(1, stripped.size() - 2));
                if (sections_.count(section))
                    fail(line_no, "duplicate section [" + section + "]");
                sections_[section];
                section_lines_[section] = line_no;
                continue;
            }
            const auto eq = stripped.find('=');
            if (eq == std::string::npos)
                fail(line_no, "expected 'key = value', got '" + stripped + "'");
            if (section.empty())
                fail(line_no, "key outside any [section]");
            const std::string key = trim(stripped.substr(0, eq));
            const std::string value = trim(stripped.substr(eq + 1));
            if (key.empty() || value.empty())
                fail(line_no, "empty key or value");
            auto& sec = sections_[section];
            if (sec.count(key))
                fail(line_no, "duplicate key '" + key + "' in [" + section + "]");
            sec[key] = Entry{value, line_no, false};
        }
    }

    bool has_section(const std::string& section) const { return sections_.count(section) > 0; }

    std::optional<std::string> get(const std::string& section, const std::string& key) {
        auto sec = sections_.find(section);
        if (sec == sections_.end())
            return std::nullopt;
        auto it = sec->second.find(key);
        if (it == sec->second.end())
            return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    std::string require(const std::string& section, const std::string& key) {
        auto value = get(section, key);
        if (!value) {
            const int line = section_lines_.count(section) ? section_lines_.at(section) : 0;
            fail(line, "missing required key '" + key + "' in [" + section + "]");
        }
        return *value;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) {
        auto value = get(section, key);
        return value ? parse_double(section, key, *value) : fallback;
    }

    int get_int(const std::string& section, const std::string& key, int fallback) {
        auto value = get(section, key);
        if (!value)
            return fallback;
        const double d = parse_double(section, key, *value);
        const int i = static_cast<int>(std::llround(d));
        if (std::abs(d - i) > 1e-12)
            fail(line_of(section, key), "key '" + key + "' must be an integer");
        return i;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) {
        auto value = get(section, key);
        return value ? *value : fallback;
    }

    double parse_double(const std::string& section, const std::string& key,
                        const std::string& text) {
        try {
            std::size_t pos = 0;
            const double d = std::stod(text, &pos);
            if (pos != text.size())
                throw std::invalid_argument("trailing characters");
            return d;
        } catch (const std::exception&) {
            fail(line_of(section, key), "cannot parse number '" + text + "' for key '" + key + "'");
        }
        return 0.0; // unreachable
    }

    void check_all_used(const std::set<std::string>& known_sections) {
        for (const auto& [section, entries] : sections_) {
            if (!known_sections.count(section))
                fail(section_lines_.at(section), "unknown section [" + section + "]");
            for (const auto& [key, entry] : entries)
                if (!entry.used)
                    fail(entry.line, "unknown key '" + key + "' in [" + section + "]");
        }
    }

    [[noreturn]] void fail(int line, const std::string& what) const {
        std::ostringstream msg;
        msg << name_ << ":" << line << ": " << what;
        throw ConfigError(msg.str());
    }

    int line_of(const std::string& section, const std::string& key) const {
        auto sec = sections_.find(section);
        if (sec != sections_.end()) {
            auto it = sec->second.find(key);
            if (it != sec->second.end())
                return it->second.line;
        }
        return 0;
    }

  private:
    std::string name_;
    std::map<std::string, Section> sections_;
    std::map<std::string, int> section_lines_;
};

} // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& name) {
    ConfigReader reader(text, name);
    ExperimentConfig cfg;

    if (reader.has_section("model")) {
        cfg.model_section_seen = true;
        cfg.model.variant = reader.require("model", "variant");
        if (cfg.model.variant != "model1" && cfg.model.variant != "model2")
            reader.fail(reader.line_of("model", "variant"),
                        "variant must be 'model1' or 'model2'");
        cfg.model.q = reader.parse_double("model", "q", reader.require("model", "q"));
        if (cfg.model.variant == "model1") {
            cfg.model.omega1_over_2pi =
                reader.parse_double("model", "omega1_over_2pi", reader.require("model", "omega1_over_2pi"));
            cfg.model.delta1_over_2pi =
                reader.parse_double("model", "delta1_over_2pi", reader.require("model", "delta1_over_2pi"));
            cfg.model.delta2_over_2pi =
                reader.parse_double("model", "delta2_over_2pi", reader.require("model", "delta2_over_2pi"));
        } else {
            cfg.model.b_over_2pi =
                reader.parse_double("model", "b_over_2pi", reader.require("model", "b_over_2pi"));
        }
    }

    cfg.scheme.kind = reader.get_string("scheme", "kind", cfg.scheme.kind);
    if (cfg.scheme.kind != "scheme1" && cfg.scheme.kind != "scheme2" &&
        cfg.scheme.kind != "both" && cfg.scheme.kind != "analytic" &&
        cfg.scheme.kind != "circuit-check")
        reader.fail(reader.line_of("scheme", "kind"),
                    "scheme kind must be scheme1 | scheme2 | both | analytic | circuit-check");

    if (reader.has_section("scan"))
        cfg.scan_section_seen = true;
    cfg.scan.grid_points = reader.get_int("scan", "grid_points", cfg.scan.grid_points);
    cfg.scan.lambda1_min = reader.get_double("scan", "lambda1_min", cfg.scan.lambda1_min);
    cfg.scan.lambda1_max = reader.get_double("scan", "lambda1_max", cfg.scan.lambda1_max);
    cfg.scan.lambda2_fixed = reader.get_double("scan", "lambda2_fixed", cfg.scan.lambda2_fixed);
    if (cfg.scan.grid_points < 1)
        reader.fail(reader.line_of("scan", "grid_points"), "grid_points must be >= 1");

    cfg.dynamics.delta_lambda = reader.get_double("dynamics", "delta_lambda", cfg.dynamics.delta_lambda);
    cfg.dynamics.v = reader.get_double("dynamics", "v", cfg.dynamics.v);
    cfg.dynamics.method = reader.get_string("dynamics", "method", cfg.dynamics.method);
    cfg.dynamics.steps = reader.get_int("dynamics", "steps", cfg.dynamics.steps);
    if (cfg.dynamics.method != "midpoint" && cfg.dynamics.method != "magnus4" &&
        cfg.dynamics.method != "rk4")
        reader.fail(reader.line_of("dynamics", "method"),
                    "method must be midpoint | magnus4 | rk4");
    if (!(cfg.dynamics.v > 0.0) || !(cfg.dynamics.delta_lambda > 0.0))
        reader.fail(0, "dynamics v and delta_lambda must be positive");
    if (cfg.dynamics.steps < 1)
        reader.fail(reader.line_of("dynamics", "steps"), "steps must be >= 1");

    cfg.fig2.delta2_over_2pi_min = reader.get_double("fig2", "delta2_over_2pi_min", cfg.fig2.delta2_over_2pi_min);
    cfg.fig2.delta2_over_2pi_max = reader.get_double("fig2", "delta2_over_2pi_max", cfg.fig2.delta2_over_2pi_max);
    cfg.fig2.delta2_points = reader.get_int("fig2", "delta2_points", cfg.fig2.delta2_points);
    cfg.fig2.n_theta = reader.get_int("fig2", "n_theta", cfg.fig2.n_theta);
    if (cfg.fig2.delta2_points < 1 || cfg.fig2.n_theta < 2)
        reader.fail(0, "[fig2] needs delta2_points >= 1 and n_theta >= 2");

    cfg.circuit.random_instances = reader.get_int("circuit", "random_instances", cfg.circuit.random_instances);
    cfg.circuit.seed = static_cast<std::uint64_t>(
        reader.get_int("circuit", "seed", static_cast<int>(cfg.circuit.seed)));
    cfg.circuit.shots = reader.get_int("circuit", "shots", cfg.circuit.shots);

    cfg.output.directory = reader.get_string("output", "directory", cfg.output.directory);
    cfg.workers = reader.get_int("output", "workers", cfg.workers);

    reader.check_all_used({"model", "scheme", "scan", "dynamics", "fig2", "circuit", "output"});
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path + ": cannot open configuration file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

HamiltonianFamily make_family(const ExperimentConfig& cfg) {
    const double two_pi = 2.0 * M_PI;
    if (cfg.model.variant == "model1")
        return HamiltonianFamily(ModelI{two_pi * cfg.model.omega1_over_2pi,
                                        two_pi * cfg.model.delta1_over_2pi,
                                        two_pi * cfg.model.delta2_over_2pi},
                                 cfg.model.q);
    if (cfg.model.variant == "model2")
        return HamiltonianFamily(ModelII{two_pi * cfg.model.b_over_2pi}, cfg.model.q);
    throw ConfigError("unknown model variant '" + cfg.model.variant + "'");
}

SchemeConfig make_scheme_config(const ExperimentConfig& cfg) {
    SchemeConfig sc;
    sc.v = cfg.dynamics.v;
    sc.delta_lambda = cfg.dynamics.delta_lambda;
    if (cfg.dynamics.method == "midpoint")
        sc.integrator.method = StepMethod::ExpMidpoint;
    else if (cfg.dynamics.method == "rk4")
        sc.integrator.method = StepMethod::RK4;
    else
        sc.integrator.method = StepMethod::ExpMagnus4;
    const double tf = 2.0 * sc.delta_lambda / sc.v;
    sc.integrator.dt = tf / cfg.dynamics.steps;
    return sc;
}

} // namespace qgt
