#include "epsweep/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>

#include "epsweep/config.hpp"
#include "epsweep/csv.hpp"
#include "epsweep/plot.hpp"
#include "epsweep/scenarios.hpp"
#include "epsweep/sweep.hpp"
#include "epsweep/two_level.hpp"
#include "epsweep/verify.hpp"

namespace epsweep {

namespace fs = std::filesystem;

namespace {

std::string fixed(double x, int digits = 8) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

fs::path resolve_out(const std::string& flag, const std::optional<std::string>& from_config) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    if (from_config) return *from_config;
    throw ValidationError(std::string("no output directory: pass --out, set ") + kOutDirEnv +
                          ", or add [output] dir to the config");
}

struct Written {
    SweepResult result;
    std::vector<fs::path> files;
};

Written run_one(const std::string& stem, const ModelSpec& spec, const Grid& grid, FigureKind kind,
                const OutputSelection& sel, const fs::path& dir, bool plots) {
    Written w{sweep(spec, grid.points()), {}};
    const auto csv = write_csv(w.result, dir, stem, sel);
    w.files = {csv.data, csv.events};
    if (plots) {
        if (kind == FigureKind::Mixing) {
            w.files.push_back(emit_plot(w.result, PlotKind::Mixing, dir / (stem + ".mixing.svg"), stem));
        } else {
            w.files.push_back(emit_plot(w.result, PlotKind::Energies, dir / (stem + ".energies.svg"), stem));
            w.files.push_back(emit_plot(w.result, PlotKind::Widths, dir / (stem + ".widths.svg"), stem));
        }
    }
    return w;
}

void report(const std::vector<fs::path>& files, std::ostream& out) {
    for (const auto& f : files) out << "wrote " << f.string() << '\n';
}

int cmd_sweep(const std::string& config_path, const std::string& out_flag, const std::string& format,
              std::ostream& out) {
    const auto cfg = load_config(config_path);
    const auto dir = resolve_out(out_flag, cfg.output.dir);
    FigureKind kind = FigureKind::Trajectories;
    if (cfg.scenario) kind = scenario(*cfg.scenario).kind;
    const auto w = run_one(cfg.label(), cfg.spec, cfg.grid, kind, cfg.output, dir, format == "both");
    report(w.files, out);
    return 0;
}

int cmd_list(std::ostream& out) {
    for (const auto& s : scenario_registry())
        out << s.name << "  [" << s.family << " " << s.panels << "]  " << s.summary << '\n';
    out << "families:";
    for (const auto& f : family_names()) out << ' ' << f;
    out << '\n';
    return 0;
}

int cmd_scenario(const std::string& name, const std::string& out_flag, const std::string& format,
                 std::ostream& out) {
    const auto dir = resolve_out(out_flag, std::nullopt);
    const bool plots = format == "both";
    if (!is_family(name)) {
        const auto& sc = scenario(name);
        report(run_one(sc.name, sc.spec, sc.grid, sc.kind, {}, dir, plots).files, out);
        return 0;
    }
    const auto members = family(name);
    std::vector<Written> runs;
    runs.reserve(members.size());
    for (const auto& sc : members) {
        runs.push_back(run_one(sc.name, sc.spec, sc.grid, sc.kind, {}, dir, plots));
        report(runs.back().files, out);
    }
    if (plots) {
        std::vector<Panel> panels;
        std::size_t columns = 2;
        if (members.front().kind == FigureKind::Mixing) {
            columns = members.front().spec.size();
            for (std::size_t k = 0; k < members.size(); ++k)
                for (std::size_t i = 0; i < columns; ++i)
                    panels.push_back({&runs[k].result, PlotKind::Mixing,
                                      members[k].name + " state " + std::to_string(i + 1), i});
        } else {
            // Energies left, widths right, one row per sub-figure pair.
            for (std::size_t k = 0; k < members.size(); ++k) {
                const auto& p = members[k].panels;
                const std::string left = p.substr(0, p.find(','));
                const std::string right = p.find(',') == std::string::npos ? left : p.substr(p.find(',') + 1);
                panels.push_back({&runs[k].result, PlotKind::Energies, "(" + left + ")", 0});
                panels.push_back({&runs[k].result, PlotKind::Widths, "(" + right + ")", 0});
            }
        }
        report({emit_figure(panels, columns, dir / (name + ".svg"))}, out);
    }
    return 0;
}

int cmd_ep_locate(const std::string& config_path, std::ostream& out) {
    const auto cfg = load_config(config_path);
    const auto r = sweep(cfg.spec, cfg.grid.points());
    const auto cands = r.events_of(EventKind::EPCandidate);
    const double h = cfg.grid.step();
    out << cfg.label() << ": N=" << r.size() << ", " << cands.size() << " EP candidate(s), grid step " << fixed(h, 6)
        << '\n';

    if (r.size() != 2) {
        out << "  numeric a     run start     run end       branches\n";
        for (const auto& e : cands)
            out << "  " << fixed(e.location()) << "    " << fixed(e.a_start) << "    " << fixed(e.a_end) << "    "
                << e.branch_i + 1 << "," << e.branch_j + 1 << '\n';
        return 0;
    }

    const auto roots = two_level::ep_parameter_roots(cfg.spec, cfg.grid.a_min, cfg.grid.a_max);
    out << "  numeric a     analytic a        |diff|      within step\n";
    std::vector<bool> used(cands.size(), false);
    for (double root : roots) {
        std::optional<std::size_t> best;
        for (std::size_t k = 0; k < cands.size(); ++k)
            if (!used[k] && (!best || std::abs(cands[k].location() - root) < std::abs(cands[*best].location() - root)))
                best = k;
        if (best) {
            used[*best] = true;
            const double d = std::abs(cands[*best].location() - root);
            out << "  " << fixed(cands[*best].location()) << "    " << fixed(root, 12) << "    " << fixed(d, 8)
                << "    " << (d <= h ? "yes" : "no") << '\n';
        } else {
            out << "  -             " << fixed(root, 12) << "    -             no\n";
        }
    }
    for (std::size_t k = 0; k < cands.size(); ++k)
        if (!used[k]) out << "  " << fixed(cands[k].location()) << "    -                 -             no\n";
    return 0;
}

int cmd_verify(const std::vector<std::string>& names, std::size_t trials, std::ostream& out) {
    for (const auto& n : names) scenario(n);
    VerifyOptions opt;
    opt.random_trials = trials;
    opt.scenarios = names;
    const auto checks = run_invariants(opt);
    print_table(checks, out);
    const bool ok = std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
    return ok ? 0 : 2;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Parameter sweeps of non-Hermitian effective Hamiltonians", "epsweep"};
    app.require_subcommand(1);

    std::string config_path, out_dir, format = "both", name;
    bool list = false;
    std::vector<std::string> verify_names;
    std::size_t trials = 10000;

    auto* sw = app.add_subcommand("sweep", "Sweep a configured model and write CSV (and SVG) files");
    sw->add_option("--config", config_path, "Config file")->required();
    sw->add_option("--out", out_dir, std::string("Output directory (else $") + kOutDirEnv + " or [output] dir)");
    sw->add_option("--format", format, "csv or both")->check(CLI::IsMember({"csv", "both"}));

    auto* sc = app.add_subcommand("scenario", "List or run the preset scenarios");
    auto* list_flag = sc->add_flag("--list", list, "List preset names");
    sc->add_option("--name", name, "Scenario or family name")->excludes(list_flag);
    sc->add_option("--out", out_dir, std::string("Output directory (else $") + kOutDirEnv + ")");
    sc->add_option("--format", format, "csv or both")->check(CLI::IsMember({"csv", "both"}));

    auto* ep = app.add_subcommand("ep-locate", "Print exceptional-point candidates");
    ep->add_option("--config", config_path, "Config file")->required();

    auto* vf = app.add_subcommand("verify", "Run the invariant suite");
    vf->add_option("--scenario", verify_names, "Limit to these scenarios");
    vf->add_option("--trials", trials, "Random 2x2 trials")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (sw->parsed()) return cmd_sweep(config_path, out_dir, format, out);
        if (sc->parsed()) {
            if (list) return cmd_list(out);
            if (name.empty()) {
                err << "error: scenario needs --list or --name\n";
                return 1;
            }
            return cmd_scenario(name, out_dir, format, out);
        }
        if (ep->parsed()) return cmd_ep_locate(config_path, out);
        if (vf->parsed()) return cmd_verify(verify_names, trials, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.numerical() ? 2 : 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

} // namespace epsweep
