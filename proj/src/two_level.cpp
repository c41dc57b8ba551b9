#include "epsweep/two_level.hpp"

#include <algorithm>
#include <cmath>

#include "epsweep/errors.hpp"

namespace epsweep::two_level {

namespace {

constexpr double kRootTol = 1e-12; // on |F| = 4|Z|²

cplx principal_sqrt(cplx w) {
    cplx r = std::sqrt(w);
    if (r.real() == 0.0 && r.imag() < 0.0) r = -r;
    return r;
}

} // namespace

cplx z_value(const Input& in) {
    const cplx d = in.eps1 - in.eps2;
    return 0.5 * principal_sqrt(d * d + 4.0 * in.omega * in.omega);
}

std::pair<cplx, cplx> eigenvalues_closed(const Input& in) {
    const cplx mid = 0.5 * (in.eps1 + in.eps2);
    const cplx z = z_value(in);
    return {mid + z, mid - z};
}

std::vector<double> EpCondition::ep_differences() const {
    if (kind == Kind::NoRealEP) return {};
    return {2.0 * x, -2.0 * x};
}

Regime EpCondition::regime(double energy_difference) const {
    if (kind == Kind::NoRealEP) return Regime::ZReal;
    const double d = std::abs(energy_difference);
    const double edge = 2.0 * std::abs(x);
    if (d > edge) return Regime::ZReal;
    if (d < edge) return Regime::ZImaginary;
    return Regime::AtEP;
}

EpCondition ep_condition(bool gamma_equal, cplx omega) {
    if (!gamma_equal) throw NotApplicable("analytic EP condition requires equal widths");
    if (omega.imag() == 0.0) return {EpCondition::Kind::NoRealEP, omega.real()};
    if (omega.real() == 0.0) return {EpCondition::Kind::ImaginaryPair, omega.imag()};
    throw NotApplicable("analytic EP condition needs purely real or purely imaginary omega; "
                        "use the numeric locator");
}

cplx discriminant(const ModelSpec& spec, double a) {
    if (spec.size() != 2) throw ShapeMismatch("two-level oracle needs a 2-level spec");
    const auto& l1 = spec.levels[0];
    const auto& l2 = spec.levels[1];
    const double e1 = l1.energy(a);
    const double e2 = l2.energy(a);
    const cplx d = l1.epsilon(a) - l2.epsilon(a);
    const cplx w = spec.coupling.mask.admits(0, 1) ? spec.coupling.element(e1, e2) : cplx{};
    return d * d + 4.0 * w * w;
}

std::vector<double> ep_parameter_roots(const ModelSpec& spec, double a_min, double a_max,
                                       std::size_t scan_points) {
    if (spec.size() != 2) throw ShapeMismatch("two-level oracle needs a 2-level spec");
    if (!(a_min < a_max) || scan_points < 2) throw ValidationError("invalid root search range");
    spec.check_domain(a_min, a_max);

    std::vector<double> xs(scan_points);
    std::vector<cplx> fs(scan_points);
    for (std::size_t k = 0; k < scan_points; ++k) {
        xs[k] = k + 1 == scan_points
                    ? a_max
                    : a_min + (a_max - a_min) * static_cast<double>(k) / static_cast<double>(scan_points - 1);
        fs[k] = discriminant(spec, xs[k]);
    }

    std::vector<double> roots;
    auto consider = [&](double a) {
        if (std::abs(discriminant(spec, a)) > kRootTol) return;
        const double merge = 2.0 * (a_max - a_min) / static_cast<double>(scan_points - 1);
        for (double r : roots) {
            if (std::abs(r - a) < merge) return;
        }
        roots.push_back(a);
    };

    for (int component = 0; component < 2; ++component) {
        auto part = [component](cplx f) { return component == 0 ? f.real() : f.imag(); };
        for (std::size_t k = 0; k + 1 < scan_points; ++k) {
            const double f0 = part(fs[k]);
            const double f1 = part(fs[k + 1]);
            if (f0 == 0.0) {
                consider(xs[k]);
                continue;
            }
            if (f1 == 0.0 || (f0 < 0.0) == (f1 < 0.0)) continue;
            double lo = xs[k];
            double hi = xs[k + 1];
            double flo = f0;
            for (;;) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const double fm = part(discriminant(spec, mid));
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            const double a = std::abs(part(discriminant(spec, lo))) <= std::abs(part(discriminant(spec, hi))) ? lo : hi;
            consider(a);
        }
        if (part(fs.back()) == 0.0) consider(xs.back());
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace epsweep::two_level
