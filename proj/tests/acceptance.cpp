// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

#include "epsweep/linalg.hpp"
#include "epsweep/scenarios.hpp"
#include "epsweep/sweep.hpp"
#include "epsweep/two_level.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace epsweep;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

SweepResult run(const std::string& name) {
    const auto& s = scenario(name);
    return sweep(s.spec, s.grid.points());
}

std::size_t count(const SweepResult& r, EventKind k) { return r.events_of(k).size(); }

double min_rigidity(const SweepResult& r) {
    double m = 1.0;
    for (const auto& p : r.points)
        for (const auto& b : p.branches) m = std::min(m, b.rigidity);
    return m;
}

std::size_t nearest_index(const SweepResult& r, double a) {
    std::size_t best = 0;
    for (std::size_t k = 0; k < r.steps(); ++k)
        if (std::abs(r.points[k].a - a) < std::abs(r.points[best].a - a)) best = k;
    return best;
}

bool unmixed(const SweepPoint& p) {
    for (const auto& b : p.branches) {
        const auto m = b.mixing();
        if (!m) return false;
        std::vector<double> q;
        for (auto c : *m) q.push_back(std::norm(c));
        std::sort(q.begin(), q.end());
        if (!(q.back() > 0.95 && q[q.size() - 2] < 0.05)) return false;
    }
    return true;
}

Outcome c1_oracle_equivalence() {
    std::mt19937_64 rng(1);
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const auto m = oracle::random_symmetric(2, rng);
        const auto es = eigendecompose(testsupport::to_matrix(m));
        const auto [r1, r2] = oracle::two_by_two(m[0][0], m[1][1], m[0][1]);
        const auto [l1, l2] = two_level::eigenvalues_closed({m[0][0], m[1][1], m[0][1]});
        worst = std::max({worst, oracle::set_distance(es.values, {r1, r2}),
                          oracle::set_distance(es.values, {l1, l2})});
    }
    return {worst <= 1e-10, "max set distance " + fmt("%.2e", worst) + " over 10^4 matrices"};
}

Outcome c2_ep_roots() {
    const auto& s = scenario("fig3ab");
    const auto roots = two_level::ep_parameter_roots(s.spec, s.grid.a_min, s.grid.a_max);
    const auto ref = oracle::fig3ab_roots(0.05);
    bool ok = roots.size() == 2 && s.grid.steps == 2001;
    double err = 0.0;
    for (std::size_t k = 0; ok && k < 2; ++k) err = std::max(err, std::abs(roots[k] - ref[k]));
    ok = ok && err <= 1e-10 && std::abs(ref[0] - 0.6) < 1e-15 && std::abs(ref[1] - 11.0 / 15.0) < 1e-15;
    const auto cands = run("fig3ab").events_of(EventKind::EPCandidate);
    const double h = s.grid.step();
    double off = 0.0;
    for (double r : ref) {
        double best = INFINITY;
        for (const auto& e : cands) best = std::min(best, std::abs(e.location() - r));
        off = std::max(off, best);
    }
    ok = ok && cands.size() == 2 && off <= h;
    return {ok, std::to_string(roots.size()) + " roots, err " + fmt("%.1e", err) + "; " +
                    std::to_string(cands.size()) + " candidates, max offset " + fmt("%.1e", off) + " (step " +
                    fmt("%.1e", h) + ")"};
}

Outcome c3_fig1() {
    const auto cd = run("fig1cd");
    const auto ab = run("fig1ab");
    const auto gh = run("fig1gh");
    const auto cands = cd.events_of(EventKind::EPCandidate);
    const bool cd_ok = cands.size() == 1 && std::abs(cands[0].location() - 0.73333) < 1e-3 && min_rigidity(cd) < 0.05;
    const bool ab_ok = count(ab, EventKind::EPCandidate) == 0 && count(ab, EventKind::EnergyCrossing) == 1 &&
                       count(ab, EventKind::WidthCrossing) == 0;
    const bool gh_ok = count(gh, EventKind::EPCandidate) == 0 && count(gh, EventKind::EnergyCrossing) == 0 &&
                       count(gh, EventKind::WidthCrossing) >= 1;
    std::string d = "cd: " + std::to_string(cands.size()) + " EP";
    if (!cands.empty()) d += " at " + fmt("%.6f", cands[0].location());
    d += ", min r " + fmt("%.4f", min_rigidity(cd));
    d += "; ab: EP " + std::to_string(count(ab, EventKind::EPCandidate)) + " Ecross " +
         std::to_string(count(ab, EventKind::EnergyCrossing)) + " Wcross " +
         std::to_string(count(ab, EventKind::WidthCrossing));
    d += "; gh: EP " + std::to_string(count(gh, EventKind::EPCandidate)) + " Ecross " +
         std::to_string(count(gh, EventKind::EnergyCrossing)) + " Wcross " +
         std::to_string(count(gh, EventKind::WidthCrossing));
    return {cd_ok && ab_ok && gh_ok, d};
}

Outcome c4_width_sum() {
    double worst = 0.0;
    std::string where;
    for (const auto& s : scenario_registry()) {
        double total = 0.0;
        for (const auto& l : s.spec.levels) total += 2 * l.gamma_half;
        const auto r = sweep(s.spec, s.grid.points());
        for (const auto& p : r.points) {
            double sum = 0.0;
            for (const auto& b : p.branches) sum += 2 * b.half_width();
            if (std::abs(sum - total) > worst) worst = std::abs(sum - total), where = s.name;
        }
    }
    return {worst <= 1e-9, "max |sum G - sum gamma| " + fmt("%.2e", worst) + " (" + where + ") over " +
                               std::to_string(scenario_registry().size()) + " scenarios"};
}

Outcome c5_flat() {
    const auto& s = scenario("fig4cd");
    const auto r = run("fig4cd");
    double worst = 0.0;
    for (const auto& p : r.points)
        for (std::size_t i = 0; i < r.size(); ++i)
            worst = std::max(worst, std::abs(2 * p.branches[i].half_width() - 2 * s.spec.levels[i].gamma_half));
    return {worst <= 1e-9, "max |G_i - gamma_i| " + fmt("%.2e", worst)};
}

Outcome c6_bifurcation() {
    const auto r = run("fig3ab");
    const auto& p = r.points[nearest_index(r, 2.0 / 3.0)];
    const double d = std::abs(p.branches[0].half_width() - p.branches[1].half_width());
    return {std::abs(d - 0.100) <= 0.002, "|G1/2 - G2/2| = " + fmt("%.6f", d) + " at a = " + fmt("%.6f", p.a)};
}

Outcome c7_selective() {
    const auto r = run("fig3cd");
    const auto cr = r.events_of(EventKind::CriticalRange);
    if (cr.empty()) return {false, "no critical range"};
    std::vector<bool> inside(4, false), ever(4, false);
    for (const auto& p : r.points)
        for (std::size_t i = 0; i < 4; ++i) {
            const bool out = std::abs(p.branches[i].half_width() - 0.5) > 0.01;
            ever[i] = ever[i] || out;
            if (p.a >= cr[0].a_start && p.a <= cr[0].a_end) inside[i] = inside[i] || out;
        }
    const auto exits = std::count(inside.begin(), inside.end(), true);
    const auto never = std::count(ever.begin(), ever.end(), false);
    return {exits == 2 && never == 2, std::to_string(exits) + " exit the band inside [" +
                                          fmt("%.4f", cr[0].a_start) + ", " + fmt("%.4f", cr[0].a_end) + "], " +
                                          std::to_string(never) + " never leave"};
}

// Branch count that, somewhere in the sweep, has Γ/2 above twice every other
// branch's maximum over the sweep; also the best observed ratio.
std::pair<std::size_t, double> separated(const SweepResult& r) {
    const std::size_t n = r.size();
    std::vector<double> peak(n, -INFINITY);
    for (const auto& p : r.points)
        for (std::size_t i = 0; i < n; ++i) peak[i] = std::max(peak[i], p.branches[i].half_width());
    std::size_t hits = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double others = -INFINITY;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) others = std::max(others, peak[j]);
        best = std::max(best, peak[i] / others);
        hits += peak[i] > 2.0 * others;
    }
    return {hits, best};
}

Outcome c8_alignment() {
    const auto [hits_ab, ratio_ab] = separated(run("fig11ab"));
    const auto [hits_ef, ratio_ef] = separated(run("fig11ef"));
    return {hits_ab == 1 && hits_ef == 0, "fig11ab: " + std::to_string(hits_ab) + " separated (best ratio " +
                                              fmt("%.3f", ratio_ab) + "); fig11ef: " + std::to_string(hits_ef) +
                                              " (best ratio " + fmt("%.3f", ratio_ef) + ")"};
}

Outcome c9_mixing() {
    const auto r = run("fig6a");
    const auto roots = oracle::fig3ab_roots(r.spec.coupling.omega.imag());
    const bool ends = unmixed(r.points.front()) && unmixed(r.points.back());
    const auto& p = r.points[nearest_index(r, 0.5 * (roots[0] + roots[1]))];
    const auto b = p.branches[0].mixing();
    if (!b) return {false, "midpoint not normalizable"};
    const double ratio = std::norm((*b)[0]) / std::norm((*b)[1]);
    return {ends && ratio >= 0.8 && ratio <= 1.25, std::string("endpoints ") + (ends ? "unmixed" : "MIXED") +
                                                       ", |b11|^2/|b12|^2 = " + fmt("%.4f", ratio) + " at a = " +
                                                       fmt("%.6f", p.a)};
}

Outcome c10_identities() {
    double biorth = 0, expansion = 0, floor = 0, rig = 0;
    for (const auto& s : scenario_registry()) {
        const auto r = sweep(s.spec, s.grid.points());
        for (const auto& p : r.points)
            for (std::size_t i = 0; i < r.size(); ++i) {
                const auto& b = p.branches[i];
                if (!b.normalized) continue;
                for (std::size_t j = 0; j < r.size(); ++j)
                    if (p.branches[j].normalized)
                        biorth = std::max(biorth, std::abs(bilinear(b.vector, p.branches[j].vector) - (i == j ? 1.0 : 0.0)));
                const auto m = b.mixing();
                cplx sq = 0.0;
                for (auto c : *m) sq += c * c;
                expansion = std::max(expansion, std::abs(sq - 1.0));
                const double A = *b.norm();
                floor = std::max(floor, 1.0 - A);
                rig = std::max(rig, std::abs(b.rigidity - 1.0 / A));
            }
    }
    const bool ok = biorth <= 1e-8 && expansion <= 1e-8 && floor <= 1e-12 && rig <= 1e-10;
    return {ok, "biorth " + fmt("%.1e", biorth) + ", expansion " + fmt("%.1e", expansion) + ", 1-A " +
                    fmt("%.1e", floor) + ", |r-1/A| " + fmt("%.1e", rig)};
}

Outcome c11_determinism() {
    const auto base = std::filesystem::temp_directory_path() / "epsweep-acceptance";
    std::filesystem::remove_all(base);
    std::string csv[2];
    for (int k = 0; k < 2; ++k) {
        const auto dir = base / ("run" + std::to_string(k));
        const std::string cmd = std::string("\"") + EPSWEEP_CLI + "\" scenario --name fig9ab --format csv --out \"" +
                                dir.string() + "\" > /dev/null";
        if (std::system(cmd.c_str()) != 0) return {false, "cli run failed: " + cmd};
        csv[k] = testsupport::slurp(dir / "fig9ab.csv");
        if (csv[k].empty()) return {false, "empty csv"};
    }
    const bool same = csv[0] == csv[1];
    return {same, std::to_string(csv[0].size()) + " bytes, " + (same ? "identical" : "DIFFERENT")};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"oracle equivalence (2x2 closed form)", c1_oracle_equivalence},
        {"analytic EP roots and candidates", c2_ep_roots},
        {"fig1 EP and crossings", c3_fig1},
        {"width-sum conservation", c4_width_sum},
        {"real-coupling flat widths", c5_flat},
        {"width-bifurcation magnitude", c6_bifurcation},
        {"selective bifurcation", c7_selective},
        {"single-state alignment", c8_alignment},
        {"mixing asymptotics and midpoint", c9_mixing},
        {"biorthogonality and expansion identities", c10_identities},
        {"determinism", c11_determinism},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("%s criterion %zu: %s -- %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                    o.detail.c_str(), dt);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed ? 1 : 0;
}
