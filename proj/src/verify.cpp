#include "epsweep/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <random>

#include "epsweep/errors.hpp"
#include "epsweep/linalg.hpp"
#include "epsweep/scenarios.hpp"
#include "epsweep/sweep.hpp"
#include "epsweep/two_level.hpp"

namespace epsweep {

namespace {

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

CheckResult bound(std::string name, double worst, double tol) {
    return {std::move(name), worst <= tol, "max " + sci(worst) + " (tol " + sci(tol) + ")"};
}

ComplexMatrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = {u(rng), u(rng)};
    return m;
}

double set_distance(cplx a1, cplx a2, cplx b1, cplx b2) {
    return std::min(std::max(std::abs(a1 - b1), std::abs(a2 - b2)), std::max(std::abs(a1 - b2), std::abs(a2 - b1)));
}

void random_checks(const VerifyOptions& opt, std::vector<CheckResult>& out) {
    std::mt19937_64 rng(opt.seed);

    double worst2 = 0.0;
    for (std::size_t t = 0; t < opt.random_trials; ++t) {
        const auto m = random_symmetric(2, rng);
        const auto [c1, c2] = two_level::eigenvalues_closed({m(0, 0), m(1, 1), m(0, 1)});
        const auto ev = eigenvalues(m);
        worst2 = std::max(worst2, set_distance(ev[0], ev[1], c1, c2));
    }
    out.push_back(bound("2x2 solver vs closed form", worst2, 1e-10));

    double trace_err = 0.0, recon_err = 0.0, scale_err = 0.0;
    const std::size_t trials = std::max<std::size_t>(opt.random_trials / 50, 20);
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t n = 3 + t % 8;
        const auto m = random_symmetric(n, rng);
        const auto es = eigendecompose(m);
        cplx sum = 0.0;
        for (auto v : es.values) sum += v;
        const double scale = std::max(m.norm_inf(), 1.0);
        trace_err = std::max(trace_err, std::abs(sum - m.trace()) / scale);
        if (!es.fully_normalized()) continue;
        ComplexMatrix rec(n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) rec(i, j) += es.values[k] * es.vectors[k][i] * es.vectors[k][j];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) recon_err = std::max(recon_err, std::abs(rec(i, j) - m(i, j)) / scale);
        CVector scaled = es.vectors[0];
        const cplx c{0.3, -1.7};
        for (auto& x : scaled) x *= c;
        scale_err = std::max(scale_err, std::abs(phase_rigidity(scaled) - phase_rigidity(es.vectors[0])));
    }
    out.push_back(bound("trace identity", trace_err, 1e-10));
    out.push_back(bound("spectral reconstruction", recon_err, 1e-9));
    out.push_back(bound("rigidity scale invariance", scale_err, 1e-12));
}

bool unmixed(const SweepPoint& p) {
    for (const auto& b : p.branches) {
        const auto m = b.mixing();
        if (!m) return false;
        double best = 0.0, rest = 0.0;
        for (auto c : *m) {
            const double q = std::norm(c);
            if (q > best) rest = std::max(rest, best), best = q;
            else rest = std::max(rest, q);
        }
        if (!(best > 0.95 && rest < 0.05)) return false;
    }
    return true;
}

void scenario_checks(const Scenario& sc, std::vector<CheckResult>& out) {
    const std::string tag = sc.name + ": ";
    SweepResult r;
    try {
        r = sweep(sc.spec, sc.grid.points());
    } catch (const Error& e) {
        out.push_back({tag + "sweep", false, e.what()});
        return;
    }
    const std::size_t n = r.size();
    double gamma_sum = 0.0;
    for (const auto& lv : sc.spec.levels) gamma_sum += lv.gamma_half;

    bool symmetric = true;
    double biorth = 0, expansion = 0, a_floor = 0, rig = 0, widths = 0, flat = 0;
    std::size_t missing = 0;
    for (const auto& p : r.points) {
        symmetric = symmetric && build_hamiltonian(sc.spec, p.a).is_symmetric();
        double wsum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& b = p.branches[i];
            wsum += b.half_width();
            flat = std::max(flat, std::abs(b.half_width() - sc.spec.levels.front().gamma_half));
            if (!b.normalized) {
                ++missing;
                continue;
            }
            for (std::size_t j = 0; j < n; ++j)
                if (p.branches[j].normalized)
                    biorth = std::max(biorth, std::abs(bilinear(b.vector, p.branches[j].vector) - (i == j ? 1.0 : 0.0)));
            cplx s = 0.0;
            const auto m = b.mixing();
            for (auto c : *m) s += c * c;
            expansion = std::max(expansion, std::abs(s - 1.0));
            const double A = *b.norm();
            a_floor = std::max(a_floor, 1.0 - A);
            rig = std::max(rig, std::abs(b.rigidity - 1.0 / A));
        }
        widths = std::max(widths, std::abs(wsum - gamma_sum));
    }
    out.push_back({tag + "symmetric H", symmetric, symmetric ? "all grid points" : "asymmetric matrix"});
    out.push_back(bound(tag + "width sum", 2 * widths, 1e-9));
    out.push_back(bound(tag + "biorthogonality", biorth, 1e-8));
    out.push_back(bound(tag + "expansion identity", expansion, 1e-8));
    out.push_back(bound(tag + "A >= 1", a_floor, 1e-12));
    out.push_back(bound(tag + "r = 1/A", rig, 1e-10));
    if (missing) out.back().detail += ", " + std::to_string(missing) + " unnormalizable";

    const auto& c = sc.spec.coupling;
    const bool equal_widths = std::all_of(sc.spec.levels.begin(), sc.spec.levels.end(), [&](const LevelSpec& l) {
        return l.gamma_half == sc.spec.levels.front().gamma_half;
    });
    if (c.omega.imag() == 0.0 && equal_widths) out.push_back(bound(tag + "real-coupling flat widths", 2 * flat, 1e-9));

    // Away from the interaction region every state sits on one basis level;
    // only holds when the coupling is confined to one level or N = 2.
    if (!c.mask.all || n == 2) {
        const bool ends = unmixed(r.points.front()) && unmixed(r.points.back());
        out.push_back({tag + "asymptotic unmixing", ends, ends ? "both ends" : "mixed at an endpoint"});
    }

    if (n == 2) {
        const auto roots = two_level::ep_parameter_roots(sc.spec, sc.grid.a_min, sc.grid.a_max);
        const auto cands = r.events_of(EventKind::EPCandidate);
        const double h = sc.grid.step();
        bool ok = roots.size() == cands.size();
        for (double root : roots) {
            bool hit = false;
            for (const auto& e : cands) hit = hit || std::abs(e.location() - root) <= h;
            ok = ok && hit;
        }
        out.push_back({tag + "EP candidates vs analytic roots", ok,
                       std::to_string(cands.size()) + " candidates, " + std::to_string(roots.size()) + " roots"});
    }
}

} // namespace

std::vector<CheckResult> run_invariants(const VerifyOptions& options) {
    std::vector<CheckResult> out;
    random_checks(options, out);
    for (const auto& sc : scenario_registry()) {
        if (!options.scenarios.empty() &&
            std::find(options.scenarios.begin(), options.scenarios.end(), sc.name) == options.scenarios.end())
            continue;
        scenario_checks(sc, out);
    }
    return out;
}

void print_table(const std::vector<CheckResult>& checks, std::ostream& out) {
    std::size_t width = 5;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    std::size_t failed = 0;
    out << std::left << std::setw(static_cast<int>(width)) << "check" << "  result  detail\n";
    for (const auto& c : checks) {
        failed += !c.pass;
        out << std::left << std::setw(static_cast<int>(width)) << c.name << "  " << (c.pass ? "PASS  " : "FAIL  ")
            << "  " << c.detail << '\n';
    }
    out << checks.size() - failed << "/" << checks.size() << " checks passed\n";
}

} // namespace epsweep
