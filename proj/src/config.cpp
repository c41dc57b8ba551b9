#include "epsweep/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <deque>
#include <map>
#include <sstream>

namespace epsweep {

namespace {

std::string describe(const std::vector<ConfigIssue>& issues) {
    std::ostringstream os;
    os << "invalid config (" << issues.size() << " problem" << (issues.size() == 1 ? "" : "s") << ")";
    for (const auto& is : issues) {
        os << "\n  ";
        if (is.line > 0) os << "line " << is.line << ": ";
        if (!is.field.empty()) os << is.field << ": ";
        os << is.message;
    }
    return os.str();
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

struct Entry {
    std::string value;
    int line;
};

struct Section {
    std::string name;
    int line;
    std::map<std::string, Entry> keys;
};

class Reader {
public:
    std::vector<ConfigIssue> issues;

    void parse_error(int line, std::string field, std::string msg) {
        issues.push_back({ConfigIssue::Kind::Parse, line, std::move(field), std::move(msg)});
    }
    void invalid(int line, std::string field, std::string msg) {
        issues.push_back({ConfigIssue::Kind::Validation, line, std::move(field), std::move(msg)});
    }

    std::optional<double> number(const Section& s, const std::string& key, bool required,
                                 std::optional<double> fallback = std::nullopt) {
        const auto it = s.keys.find(key);
        const std::string field = s.name + "." + key;
        if (it == s.keys.end()) {
            if (required) invalid(s.line, field, "missing required key");
            return fallback;
        }
        const auto& v = it->second.value;
        double x = 0.0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc{} || p != v.data() + v.size()) {
            parse_error(it->second.line, field, "not a number: '" + v + "'");
            return fallback;
        }
        if (!std::isfinite(x)) {
            invalid(it->second.line, field, "must be finite");
            return fallback;
        }
        return x;
    }

    std::optional<bool> boolean(const Section& s, const std::string& key) {
        const auto it = s.keys.find(key);
        if (it == s.keys.end()) return std::nullopt;
        const auto& v = it->second.value;
        if (v == "true" || v == "yes" || v == "1") return true;
        if (v == "false" || v == "no" || v == "0") return false;
        parse_error(it->second.line, s.name + "." + key, "expected true or false, got '" + v + "'");
        return std::nullopt;
    }

    void reject_unknown(const Section& s, std::initializer_list<std::string_view> allowed) {
        for (const auto& [k, e] : s.keys) {
            bool ok = false;
            for (auto a : allowed) ok = ok || k == a;
            if (!ok) parse_error(e.line, s.name + "." + k, "unknown key");
        }
    }
};

ChannelMask parse_mask(Reader& rd, const Entry& e) {
    if (e.value == "all") return ChannelMask::full();
    std::vector<std::size_t> levels;
    for (const auto& tok : split_list(e.value)) {
        long long k = 0;
        const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), k);
        if (ec != std::errc{} || p != tok.data() + tok.size()) {
            rd.parse_error(e.line, "coupling.mask", "not a level index: '" + tok + "'");
            continue;
        }
        if (k < 1) {
            rd.invalid(e.line, "coupling.mask", "level indices start at 1");
            continue;
        }
        levels.push_back(static_cast<std::size_t>(k - 1));
    }
    if (levels.empty()) rd.invalid(e.line, "coupling.mask", "empty mask");
    return ChannelMask::only(std::move(levels));
}

void parse_output(Reader& rd, const Section& s, OutputSelection& out) {
    rd.reject_unknown(s, {"diagnostics", "dir"});
    if (auto it = s.keys.find("dir"); it != s.keys.end()) {
        if (it->second.value.empty())
            rd.invalid(it->second.line, "output.dir", "empty directory");
        else
            out.dir = it->second.value;
    }
    const auto it = s.keys.find("diagnostics");
    if (it == s.keys.end()) return;
    const auto toks = split_list(it->second.value);
    if (toks.size() == 1 && toks[0] == "all") return;
    out.energies = out.half_widths = out.rigidity = out.norms = out.mixing = false;
    for (const auto& t : toks) {
        if (t == "E") out.energies = true;
        else if (t == "G2") out.half_widths = true;
        else if (t == "r") out.rigidity = true;
        else if (t == "A") out.norms = true;
        else if (t == "b2") out.mixing = true;
        else rd.parse_error(it->second.line, "output.diagnostics", "unknown diagnostic '" + t + "' (E, G2, r, A, b2)");
    }
    if (toks.empty()) rd.invalid(it->second.line, "output.diagnostics", "empty list");
}

LevelSpec parse_level(Reader& rd, const Section& s) {
    std::string kind = "linear";
    if (auto it = s.keys.find("trajectory"); it != s.keys.end()) kind = it->second.value;
    LevelSpec lv;
    lv.gamma_half = rd.number(s, "gamma_half", true, 0.0).value();
    if (kind == "linear") {
        rd.reject_unknown(s, {"trajectory", "offset", "slope", "gamma_half"});
        lv.trajectory = LinearTrajectory{rd.number(s, "offset", true, 0.0).value(),
                                         rd.number(s, "slope", false, 0.0).value()};
    } else if (kind == "hyperbolic") {
        rd.reject_unknown(s, {"trajectory", "scale", "gamma_half"});
        lv.trajectory = HyperbolicTrajectory{rd.number(s, "scale", true, 1.0).value()};
    } else {
        rd.parse_error(s.keys.at("trajectory").line, "level.trajectory",
                       "expected linear or hyperbolic, got '" + kind + "'");
    }
    return lv;
}

} // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : ValidationError(describe(issues)), issues_(std::move(issues)) {}

ScenarioConfig parse_config(std::string_view text) {
    Reader rd;
    Section top{"", 0, {}};
    std::deque<Section> sections;
    Section* cur = &top;

    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++lineno;
        if (auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                rd.parse_error(lineno, "", "unterminated section header");
                continue;
            }
            std::string name(trim(line.substr(1, line.size() - 2)));
            if (name != "grid" && name != "coupling" && name != "level" && name != "output") {
                rd.parse_error(lineno, name, "unknown section");
            }
            if (name != "level") {
                for (const auto& s : sections)
                    if (s.name == name) rd.parse_error(lineno, name, "section repeated");
            }
            sections.push_back({name, lineno, {}});
            cur = &sections.back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            rd.parse_error(lineno, "", "expected 'key = value'");
            continue;
        }
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        const std::string field = cur->name.empty() ? key : cur->name + "." + key;
        if (key.empty()) {
            rd.parse_error(lineno, "", "missing key");
            continue;
        }
        if (cur->keys.contains(key)) {
            rd.parse_error(lineno, field, "duplicate key");
            continue;
        }
        cur->keys.emplace(key, Entry{value, lineno});
    }

    ScenarioConfig cfg;
    rd.reject_unknown(top, {"scenario"});
    if (auto it = top.keys.find("scenario"); it != top.keys.end()) {
        try {
            const auto& sc = scenario(it->second.value);
            cfg.scenario = sc.name;
            cfg.spec = sc.spec;
            cfg.grid = sc.grid;
        } catch (const UnknownScenario& e) {
            rd.invalid(it->second.line, "scenario", e.what());
        }
    }
    const bool preset = top.keys.contains("scenario");

    bool have_grid = false;
    bool have_coupling = false;
    for (const auto& s : sections) {
        if (s.name == "grid") {
            have_grid = true;
            rd.reject_unknown(s, {"a_min", "a_max", "steps"});
            cfg.grid.a_min = rd.number(s, "a_min", !preset, cfg.grid.a_min).value();
            cfg.grid.a_max = rd.number(s, "a_max", !preset, cfg.grid.a_max).value();
            const auto steps = rd.number(s, "steps", false, static_cast<double>(cfg.grid.steps)).value();
            if (steps != std::floor(steps) || steps < 2 || steps > 1e8)
                rd.invalid(s.keys.contains("steps") ? s.keys.at("steps").line : s.line, "grid.steps",
                           "must be an integer in [2, 1e8]");
            else
                cfg.grid.steps = static_cast<std::size_t>(steps);
        } else if (s.name == "coupling") {
            have_coupling = true;
            if (preset) {
                rd.invalid(s.line, "coupling", "cannot be combined with a preset scenario");
                continue;
            }
            rd.reject_unknown(s, {"omega_re", "omega_im", "gaussian", "gaussian_width", "mask"});
            auto& c = cfg.spec.coupling;
            c.omega = {rd.number(s, "omega_re", false, 0.0).value(), rd.number(s, "omega_im", false, 0.0).value()};
            c.gaussian = rd.boolean(s, "gaussian").value_or(false);
            c.gaussian_width = rd.number(s, "gaussian_width", false, 1.0).value();
            if (auto it = s.keys.find("mask"); it != s.keys.end()) c.mask = parse_mask(rd, it->second);
        } else if (s.name == "level") {
            if (preset) {
                rd.invalid(s.line, "level", "cannot be combined with a preset scenario");
                continue;
            }
            cfg.spec.levels.push_back(parse_level(rd, s));
        } else if (s.name == "output") {
            parse_output(rd, s, cfg.output);
        }
    }

    if (!preset) {
        if (!have_grid) rd.invalid(0, "grid", "missing [grid] section");
        if (!have_coupling) rd.invalid(0, "coupling", "missing [coupling] section");
    }
    const bool structural_ok = rd.issues.empty();
    if (structural_ok) {
        for (auto& p : cfg.spec.problems()) rd.invalid(0, "model", p);
        for (auto& p : cfg.grid.problems()) rd.invalid(0, "grid", p);
        if (rd.issues.empty()) {
            try {
                cfg.spec.check_domain(cfg.grid.a_min, cfg.grid.a_max);
            } catch (const DomainError& e) {
                rd.invalid(0, "grid", e.what());
            }
        }
    }
    if (!rd.issues.empty()) throw ConfigError(std::move(rd.issues));
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_double(double x) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

std::string serialize_config(const ScenarioConfig& config) {
    std::ostringstream os;
    if (config.scenario) os << "scenario = " << *config.scenario << "\n\n";

    os << "[grid]\n"
       << "a_min = " << format_double(config.grid.a_min) << "\n"
       << "a_max = " << format_double(config.grid.a_max) << "\n"
       << "steps = " << config.grid.steps << "\n";

    if (!config.scenario) {
        const auto& c = config.spec.coupling;
        os << "\n[coupling]\n"
           << "omega_re = " << format_double(c.omega.real()) << "\n"
           << "omega_im = " << format_double(c.omega.imag()) << "\n"
           << "gaussian = " << (c.gaussian ? "true" : "false") << "\n"
           << "gaussian_width = " << format_double(c.gaussian_width) << "\n"
           << "mask =";
        if (c.mask.all) {
            os << " all";
        } else {
            for (auto k : c.mask.levels) os << ' ' << (k + 1);
        }
        os << "\n";
        for (const auto& lv : config.spec.levels) {
            os << "\n[level]\n";
            if (const auto* lin = std::get_if<LinearTrajectory>(&lv.trajectory)) {
                os << "trajectory = linear\n"
                   << "offset = " << format_double(lin->offset) << "\n"
                   << "slope = " << format_double(lin->slope) << "\n";
            } else {
                const auto& h = std::get<HyperbolicTrajectory>(lv.trajectory);
                os << "trajectory = hyperbolic\n"
                   << "scale = " << format_double(h.scale) << "\n";
            }
            os << "gamma_half = " << format_double(lv.gamma_half) << "\n";
        }
    }

    const auto& o = config.output;
    os << "\n[output]\ndiagnostics =";
    if (o.energies) os << " E";
    if (o.half_widths) os << " G2";
    if (o.rigidity) os << " r";
    if (o.norms) os << " A";
    if (o.mixing) os << " b2";
    os << "\n";
    if (o.dir) os << "dir = " << *o.dir << "\n";
    return os.str();
}

} // namespace epsweep
