#include "hq/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "hq/errors.hpp"

namespace hq {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Entry {
    std::string value;
    int line;
};

class Reader {
public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    const Entry& require(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError("missing required key", key);
        return it->second;
    }

    void read(const std::string& key, int& out, bool required = false) const {
        if (!has(key)) {
            if (required) require(key);
            return;
        }
        const Entry& e = entries_.at(key);
        const auto [end, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), out);
        if (ec != std::errc() || end != e.value.data() + e.value.size())
            throw ConfigError("expected an integer, got '" + e.value + "'", key, e.line);
    }

    void read(const std::string& key, double& out, bool required = false) const {
        if (!has(key)) {
            if (required) require(key);
            return;
        }
        const Entry& e = entries_.at(key);
        const auto [end, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), out);
        if (ec != std::errc() || end != e.value.data() + e.value.size())
            throw ConfigError("expected a number, got '" + e.value + "'", key, e.line);
    }

    void read(const std::string& key, bool& out) const {
        if (!has(key)) return;
        const Entry& e = entries_.at(key);
        if (e.value == "true" || e.value == "yes" || e.value == "1")
            out = true;
        else if (e.value == "false" || e.value == "no" || e.value == "0")
            out = false;
        else
            throw ConfigError("expected true or false, got '" + e.value + "'", key, e.line);
    }

    void read(const std::string& key, std::string& out, bool required = false) const {
        if (!has(key)) {
            if (required) require(key);
            return;
        }
        out = entries_.at(key).value;
    }

    int line(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }

private:
    std::map<std::string, Entry> entries_;
};

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "problem.n", "problem.k", "problem.l", "problem.f", "problem.r1", "problem.r2",
        "problem.override_validation", "problem.validation_samples",
        "grid.mode", "grid.nodes", "grid.n_theta", "grid.n_phi",
        "solver.newton_tol", "solver.max_newton", "solver.dt_init", "solver.dt_min",
        "solver.dt_max", "solver.fd_step", "solver.max_halvings", "solver.cone_margin",
        "output.directory", "output.formats"};
    return keys;
}

}  // namespace

QuotientParams RunConfig::params() const {
    return QuotientParams::make(problem.n, problem.k, problem.l);
}

Grid RunConfig::make_grid() const {
    if (grid.mode == GridMode::Axisym) return build_axisym_grid(grid.nodes);
    return build_s2_grid(grid.n_theta, grid.n_phi);
}

HomotopyTarget RunConfig::make_target() const {
    return make_homotopy(Prescription(parse_f(problem.f)), params(), problem.r1, problem.r2);
}

RunConfig parse_config(std::string_view text) {
    std::map<std::string, Entry> entries;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header", {}, line_no);
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "problem" && section != "grid" && section != "solver" && section != "output")
                throw ConfigError("unknown section", section, line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected key = value", {}, line_no);
        if (section.empty()) throw ConfigError("key outside of a section", std::string(trim(line.substr(0, eq))), line_no);
        const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
        if (!known_keys().count(key)) throw ConfigError("unknown key", key, line_no);
        if (entries.count(key)) throw ConfigError("duplicate key", key, line_no);
        entries[key] = Entry{std::string(trim(line.substr(eq + 1))), line_no};
    }

    const Reader r(std::move(entries));
    RunConfig cfg;
    auto& pb = cfg.problem;
    r.read("problem.n", pb.n, true);
    r.read("problem.k", pb.k, true);
    r.read("problem.l", pb.l, true);
    r.read("problem.f", pb.f, true);
    r.read("problem.r1", pb.r1, true);
    r.read("problem.r2", pb.r2, true);
    r.read("problem.override_validation", pb.override_validation);
    r.read("problem.validation_samples", pb.validation_samples);

    try {
        (void)cfg.params();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), "problem.k", r.line("problem.k"));
    }
    if (!(0.0 < pb.r1 && pb.r1 < 1.0 && 1.0 < pb.r2))
        throw ConfigError("annulus must satisfy 0 < r1 < 1 < r2", "problem.r1", r.line("problem.r1"));
    if (pb.validation_samples < 100)
        throw ConfigError("validation_samples must be at least 100", "problem.validation_samples",
                          r.line("problem.validation_samples"));
    try {
        parse_f(pb.f).check_dimension(pb.n + 1);
    } catch (const ParseError& e) {
        throw ConfigError(e.what(), "problem.f", r.line("problem.f"));
    }

    std::string mode = "axisym";
    r.read("grid.mode", mode);
    if (mode == "axisym")
        cfg.grid.mode = GridMode::Axisym;
    else if (mode == "s2")
        cfg.grid.mode = GridMode::S2;
    else
        throw ConfigError("grid mode must be axisym or s2", "grid.mode", r.line("grid.mode"));
    r.read("grid.nodes", cfg.grid.nodes);
    r.read("grid.n_theta", cfg.grid.n_theta);
    r.read("grid.n_phi", cfg.grid.n_phi);
    if (cfg.grid.mode == GridMode::S2 && pb.n != 2)
        throw ConfigError("grid mode s2 requires n = 2", "grid.mode", r.line("grid.mode"));
    try {
        (void)cfg.make_grid();
    } catch (const TooCoarse& e) {
        throw ConfigError(e.what(), "grid", r.line(cfg.grid.mode == GridMode::S2 ? "grid.n_theta" : "grid.nodes"));
    }

    auto& s = cfg.solver;
    s = SolverConfig::defaults_for(cfg.make_grid());
    r.read("solver.newton_tol", s.newton_tol);
    r.read("solver.max_newton", s.max_newton);
    r.read("solver.dt_init", s.dt_init);
    r.read("solver.dt_min", s.dt_min);
    r.read("solver.dt_max", s.dt_max);
    r.read("solver.fd_step", s.fd_step);
    r.read("solver.max_halvings", s.max_halvings);
    r.read("solver.cone_margin", s.cone_margin);
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), "solver");
    }

    r.read("output.directory", cfg.output.directory);
    if (r.has("output.formats")) {
        cfg.output.csv = cfg.output.obj = false;
        std::string list;
        r.read("output.formats", list);
        std::istringstream items(list);
        std::string item;
        while (std::getline(items, item, ',')) {
            const auto name = trim(item);
            if (name == "csv")
                cfg.output.csv = true;
            else if (name == "obj")
                cfg.output.obj = true;
            else if (!name.empty())
                throw ConfigError("unknown output format '" + std::string(name) + "'", "output.formats",
                                  r.line("output.formats"));
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    const auto& pb = cfg.problem;
    out << "[problem]\n"
        << "n = " << pb.n << "\nk = " << pb.k << "\nl = " << pb.l << "\n"
        << "f = " << pb.f << "\n"
        << "r1 = " << fmt_double(pb.r1) << "\nr2 = " << fmt_double(pb.r2) << "\n"
        << "override_validation = " << (pb.override_validation ? "true" : "false") << "\n"
        << "validation_samples = " << pb.validation_samples << "\n\n";
    out << "[grid]\n"
        << "mode = " << (cfg.grid.mode == GridMode::Axisym ? "axisym" : "s2") << "\n"
        << "nodes = " << cfg.grid.nodes << "\nn_theta = " << cfg.grid.n_theta
        << "\nn_phi = " << cfg.grid.n_phi << "\n\n";
    const auto& s = cfg.solver;
    out << "[solver]\n"
        << "newton_tol = " << fmt_double(s.newton_tol) << "\n"
        << "max_newton = " << s.max_newton << "\n"
        << "dt_init = " << fmt_double(s.dt_init) << "\n"
        << "dt_min = " << fmt_double(s.dt_min) << "\n"
        << "dt_max = " << fmt_double(s.dt_max) << "\n"
        << "fd_step = " << fmt_double(s.fd_step) << "\n"
        << "max_halvings = " << s.max_halvings << "\n"
        << "cone_margin = " << fmt_double(s.cone_margin) << "\n\n";
    std::string formats;
    if (cfg.output.csv) formats = "csv";
    if (cfg.output.obj) formats += formats.empty() ? "obj" : ", obj";
    out << "[output]\n"
        << "directory = " << cfg.output.directory << "\n"
        << "formats = " << formats << "\n";
    return out.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    const auto& p = a.problem;
    const auto& q = b.problem;
    const auto& s = a.solver;
    const auto& t = b.solver;
    return p.n == q.n && p.k == q.k && p.l == q.l && p.f == q.f && p.r1 == q.r1 && p.r2 == q.r2 &&
           p.override_validation == q.override_validation && p.validation_samples == q.validation_samples &&
           a.grid.mode == b.grid.mode && a.grid.nodes == b.grid.nodes && a.grid.n_theta == b.grid.n_theta &&
           a.grid.n_phi == b.grid.n_phi && s.newton_tol == t.newton_tol && s.max_newton == t.max_newton &&
           s.dt_init == t.dt_init && s.dt_min == t.dt_min && s.dt_max == t.dt_max && s.fd_step == t.fd_step &&
           s.max_halvings == t.max_halvings && s.cone_margin == t.cone_margin &&
           a.output.directory == b.output.directory && a.output.csv == b.output.csv &&
           a.output.obj == b.output.obj;
}

}  // namespace hq
