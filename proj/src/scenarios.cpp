#include "epsweep/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "epsweep/errors.hpp"

namespace epsweep {

std::vector<std::string> Grid::problems() const {
    std::vector<std::string> out;
    if (!std::isfinite(a_min) || !std::isfinite(a_max)) out.push_back("grid: a_min and a_max must be finite");
    if (!(a_min < a_max)) out.push_back("grid: a_min must be < a_max");
    if (steps < 2) out.push_back("grid: steps must be >= 2");
    return out;
}

std::vector<double> Grid::points() const {
    std::vector<double> pts(steps);
    const double last = static_cast<double>(steps - 1);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) / last;
        pts[k] = k + 1 == steps ? a_max : a_min + (a_max - a_min) * t;
    }
    return pts;
}

namespace {

// Grid ranges are not given by the figures; these cover each crossing region
// with unmixed states at both ends. The N=2 range puts grid points ~3e-5 from
// both analytic EPs (0.6, 11/15) of the imaginary-coupling case.
constexpr Grid kGridTwo{0.0, 1.18, 2001};
constexpr Grid kGridFour{0.0, 1.4, 2001};
constexpr Grid kGridTen{-0.2, 1.4, 2001};
constexpr Grid kGridTenHyperbolic{-0.1, 3.5, 2001};

LevelSpec linear(double offset, double slope, double gamma_half) {
    return {LinearTrajectory{offset, slope}, gamma_half};
}

const cplx kComplex05{0.05, 0.05};
const cplx kImag05{0.0, 0.05};
const cplx kReal05{0.05, 0.0};

// e1 = 1 − a/2, e2 = a
ModelSpec two_level(double g1, double g2, cplx omega) {
    ModelSpec s;
    s.levels = {linear(1.0, -0.5, g1), linear(0.0, 1.0, g2)};
    s.coupling = {omega, false, 1.0, ChannelMask::full()};
    return s;
}

// e1 = 1 − a/2, e2 = 1.05 − a/2, e3 = 1.1 − a/2, e4 = a
ModelSpec four_level(const std::vector<double>& g, cplx omega, bool one_channel) {
    ModelSpec s;
    s.levels = {linear(1.0, -0.5, g[0]), linear(1.05, -0.5, g[1]), linear(1.1, -0.5, g[2]),
                linear(0.0, 1.0, g[3])};
    s.coupling = {omega, true, 1.0, one_channel ? ChannelMask::only({3}) : ChannelMask::full()};
    return s;
}

// Level order: 1, 1.1, 1.2, 1.3, 0.9, 0.8, 0.7, 0.6, 0.5 (each − a/2), then the
// crossing level 10 which carries the single channel.
ModelSpec ten_level(const std::vector<double>& g, cplx omega, bool hyperbolic) {
    static const double offsets[9] = {1.0, 1.1, 1.2, 1.3, 0.9, 0.8, 0.7, 0.6, 0.5};
    ModelSpec s;
    for (std::size_t i = 0; i < 9; ++i) s.levels.push_back(linear(offsets[i], -0.5, g[i]));
    if (hyperbolic) {
        s.levels.push_back({HyperbolicTrajectory{0.15}, g[9]});
    } else {
        s.levels.push_back(linear(0.0, 1.0, g[9]));
    }
    s.coupling = {omega, true, 1.0, ChannelMask::only({9})};
    return s;
}

const std::vector<double> kEqual4(4, 0.5);
const std::vector<double> kSlight4{0.494, 0.498, 0.502, 0.506};
const std::vector<double> kSpread4{0.35, 0.45, 0.55, 0.65};
const std::vector<double> kEqual10(10, 0.5);
const std::vector<double> kSpread10{0.50, 0.51, 0.52, 0.53, 0.54, 0.55, 0.56, 0.57, 0.58, 0.59};

std::vector<Scenario> make_registry() {
    using K = FigureKind;
    std::vector<Scenario> r;
    auto add = [&r](std::string family, std::string sub, std::string panels, std::string summary,
                    ModelSpec spec, Grid grid, K kind) {
        r.push_back({family + sub, std::move(family), std::move(panels), std::move(summary),
                     std::move(spec), grid, kind});
    };

    // N = 2, ω = 0.05(1+i), γ2 = 1.1 γ1: beyond, at, and below the EP.
    const double fig1_g1[4] = {1.2, 1.0, 0.9, 0.7};
    const char* fig1_sub[4] = {"ab", "cd", "ef", "gh"};
    const char* fig2_sub[4] = {"a", "b", "c", "d"};
    for (int i = 0; i < 4; ++i) {
        const double g1 = fig1_g1[i];
        const auto spec = two_level(g1, 1.1 * g1, kComplex05);
        const std::string tag = "N=2, gamma1/2=" + std::to_string(g1).substr(0, 3) + ", omega=0.05(1+i)";
        add("fig1", fig1_sub[i], std::string{fig1_sub[i][0]} + "," + fig1_sub[i][1], tag, spec, kGridTwo,
            K::Trajectories);
        add("fig2", fig2_sub[i], fig2_sub[i], "mixing, " + tag, spec, kGridTwo, K::Mixing);
    }

    // ω = 0.05i, K = 1.
    add("fig3", "ab", "a,b", "N=2, gamma/2=0.5, omega=0.05i", two_level(0.5, 0.5, kImag05), kGridTwo, K::Trajectories);
    add("fig3", "cd", "c,d", "N=4, K=1, gamma/2=0.5, omega=0.05i", four_level(kEqual4, kImag05, true), kGridFour,
        K::Trajectories);
    add("fig3", "ef", "e,f", "N=4, K=1, gamma/2=0.494..0.506, omega=0.05i", four_level(kSlight4, kImag05, true),
        kGridFour, K::Trajectories);
    add("fig3", "gh", "g,h", "N=2, gamma/2=0.45,0.55, omega=0.05i", two_level(0.45, 0.55, kImag05), kGridTwo,
        K::Trajectories);
    add("fig3", "ij", "i,j", "N=4, K=1, gamma/2=0.35..0.65, omega=0.05i", four_level(kSpread4, kImag05, true),
        kGridFour, K::Trajectories);

    // N = 4, K = 1, complex and real ω.
    add("fig4", "ab", "a,b", "N=4, K=1, gamma/2=0.5, omega=0.05(1+i)", four_level(kEqual4, kComplex05, true),
        kGridFour, K::Trajectories);
    add("fig4", "cd", "c,d", "N=4, K=1, gamma/2=0.5, omega=0.05", four_level(kEqual4, kReal05, true), kGridFour,
        K::Trajectories);
    add("fig4", "ef", "e,f", "N=4, K=1, gamma/2=0.35..0.65, omega=0.05(1+i)", four_level(kSpread4, kComplex05, true),
        kGridFour, K::Trajectories);
    add("fig4", "gh", "g,h", "N=4, K=1, gamma/2=0.35..0.65, omega=0.05", four_level(kSpread4, kReal05, true),
        kGridFour, K::Trajectories);

    // N = 4, K = 4.
    add("fig5", "ab", "a,b", "N=4, K=4, gamma/2=0.5, omega=0.05(1+i)", four_level(kEqual4, kComplex05, false),
        kGridFour, K::Trajectories);
    add("fig5", "cd", "c,d", "N=4, K=4, gamma/2=0.5, omega=0.05i", four_level(kEqual4, kImag05, false), kGridFour,
        K::Trajectories);
    add("fig5", "ef", "e,f", "N=4, K=4, gamma/2=0.5, omega=0.05", four_level(kEqual4, kReal05, false), kGridFour,
        K::Trajectories);

    // Mixing coefficients of the fig3 / fig4 / fig5 systems.
    add("fig6", "a", "a", "mixing of fig3ab", two_level(0.5, 0.5, kImag05), kGridTwo, K::Mixing);
    add("fig6", "b", "b", "mixing of fig3cd", four_level(kEqual4, kImag05, true), kGridFour, K::Mixing);
    add("fig6", "c", "c", "mixing of fig3ef", four_level(kSlight4, kImag05, true), kGridFour, K::Mixing);
    add("fig6", "d", "d", "mixing of fig3gh", two_level(0.45, 0.55, kImag05), kGridTwo, K::Mixing);
    add("fig6", "e", "e", "mixing of fig3ij", four_level(kSpread4, kImag05, true), kGridFour, K::Mixing);
    add("fig7", "a", "a", "mixing of fig4ab", four_level(kEqual4, kComplex05, true), kGridFour, K::Mixing);
    add("fig7", "b", "b", "mixing of fig4cd", four_level(kEqual4, kReal05, true), kGridFour, K::Mixing);
    add("fig7", "c", "c", "mixing of fig4ef", four_level(kSpread4, kComplex05, true), kGridFour, K::Mixing);
    add("fig7", "d", "d", "mixing of fig4gh", four_level(kSpread4, kReal05, true), kGridFour, K::Mixing);
    add("fig8", "a", "a", "mixing of fig5ab", four_level(kEqual4, kComplex05, false), kGridFour, K::Mixing);
    add("fig8", "b", "b", "mixing of fig5cd", four_level(kEqual4, kImag05, false), kGridFour, K::Mixing);
    add("fig8", "c", "c", "mixing of fig5ef", four_level(kEqual4, kReal05, false), kGridFour, K::Mixing);

    // N = 10, K = 1, e10 = a.
    add("fig9", "ab", "a,b", "N=10, K=1, gamma/2=0.5, omega=0.07i", ten_level(kEqual10, {0.0, 0.07}, false),
        kGridTen, K::Trajectories);
    add("fig9", "cd", "c,d", "N=10, K=1, gamma/2=0.50..0.59, omega=0.07i", ten_level(kSpread10, {0.0, 0.07}, false),
        kGridTen, K::Trajectories);
    add("fig9", "ef", "e,f", "N=10, K=1, gamma/2=0.50..0.59, omega=0.07", ten_level(kSpread10, {0.07, 0.0}, false),
        kGridTen, K::Trajectories);
    const double fig10_x[4] = {0.05, 0.08, 0.10, 0.15};
    const char* fig10_sub[4] = {"ab", "cd", "ef", "gh"};
    for (int i = 0; i < 4; ++i) {
        std::ostringstream tag;
        tag << "N=10, K=1, gamma/2=0.50..0.59, omega=" << fig10_x[i] << "i";
        add("fig10", fig10_sub[i], std::string{fig10_sub[i][0]} + "," + fig10_sub[i][1], tag.str(),
            ten_level(kSpread10, {0.0, fig10_x[i]}, false), kGridTen, K::Trajectories);
    }

    // N = 10, K = 1, e10 = 0.15/(0.15 + a).
    add("fig11", "ab", "a,b", "N=10, K=1, e10=0.15/(0.15+a), omega=0.07i", ten_level(kSpread10, {0.0, 0.07}, true),
        kGridTenHyperbolic, K::Trajectories);
    add("fig11", "cd", "c,d", "N=10, K=1, e10=0.15/(0.15+a), omega=0.07(1+i)",
        ten_level(kSpread10, {0.07, 0.07}, true), kGridTenHyperbolic, K::Trajectories);
    add("fig11", "ef", "e,f", "N=10, K=1, e10=0.15/(0.15+a), omega=0.07", ten_level(kSpread10, {0.07, 0.0}, true),
        kGridTenHyperbolic, K::Trajectories);
    return r;
}

} // namespace

const std::vector<Scenario>& scenario_registry() {
    static const std::vector<Scenario> registry = make_registry();
    return registry;
}

std::vector<std::string> scenario_names() {
    std::vector<std::string> out;
    for (const auto& s : scenario_registry()) out.push_back(s.name);
    return out;
}

std::vector<std::string> family_names() {
    std::vector<std::string> out;
    for (const auto& s : scenario_registry()) {
        if (std::find(out.begin(), out.end(), s.family) == out.end()) out.push_back(s.family);
    }
    return out;
}

bool is_family(std::string_view name) {
    const auto fams = family_names();
    return std::find(fams.begin(), fams.end(), name) != fams.end();
}

std::vector<Scenario> family(std::string_view name) {
    std::vector<Scenario> out;
    for (const auto& s : scenario_registry()) {
        if (s.family == name) out.push_back(s);
    }
    if (out.empty()) throw UnknownScenario("unknown figure family '" + std::string(name) + "'");
    return out;
}

const Scenario& scenario(std::string_view name) {
    for (const auto& s : scenario_registry()) {
        if (s.name == name) return s;
    }
    std::ostringstream os;
    os << "unknown scenario '" << name << "'; valid names:";
    for (const auto& s : scenario_registry()) os << ' ' << s.name;
    throw UnknownScenario(os.str());
}

} // namespace epsweep
