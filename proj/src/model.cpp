#include "epsweep/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "epsweep/errors.hpp"

namespace epsweep {

double LevelSpec::energy(double a) const {
    return std::visit(
        [a](const auto& t) -> double {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, LinearTrajectory>) {
                return t.offset + t.slope * a;
            } else {
                const double denom = t.scale + a;
                if (denom == 0.0) {
                    throw DomainError("hyperbolic trajectory has a pole at a = " + std::to_string(a));
                }
                return t.scale / denom;
            }
        },
        trajectory);
}

cplx LevelSpec::epsilon(double a) const { return {energy(a), -gamma_half}; }

bool ChannelMask::contains(std::size_t i) const {
    return all || std::find(levels.begin(), levels.end(), i) != levels.end();
}

cplx CouplingSpec::element(double ei, double ej) const {
    if (!gaussian) return omega;
    const double d = (ei - ej) / gaussian_width;
    return omega * std::exp(-d * d);
}

std::vector<std::string> ModelSpec::problems() const {
    std::vector<std::string> out;
    if (levels.size() < 2) out.push_back("model needs at least 2 levels, got " + std::to_string(levels.size()));
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto& lv = levels[i];
        const std::string tag = "level " + std::to_string(i + 1) + ": ";
        if (!std::isfinite(lv.gamma_half) || lv.gamma_half < 0.0) {
            out.push_back(tag + "gamma_half must be finite and >= 0");
        }
        if (const auto* lin = std::get_if<LinearTrajectory>(&lv.trajectory)) {
            if (!std::isfinite(lin->offset) || !std::isfinite(lin->slope)) {
                out.push_back(tag + "linear trajectory coefficients must be finite");
            }
        } else if (const auto* hyp = std::get_if<HyperbolicTrajectory>(&lv.trajectory)) {
            if (!std::isfinite(hyp->scale) || hyp->scale == 0.0) {
                out.push_back(tag + "hyperbolic scale must be finite and nonzero");
            }
        }
    }
    const auto& c = coupling;
    if (!std::isfinite(c.omega.real()) || !std::isfinite(c.omega.imag())) out.push_back("coupling: omega must be finite");
    if (!std::isfinite(c.gaussian_width) || c.gaussian_width <= 0.0) {
        out.push_back("coupling: gaussian_width must be > 0");
    }
    if (!c.mask.all) {
        if (c.mask.levels.empty()) out.push_back("coupling: channel mask is empty");
        for (auto idx : c.mask.levels) {
            if (idx >= levels.size()) {
                out.push_back("coupling: mask level " + std::to_string(idx + 1) + " out of range");
            }
        }
    }
    return out;
}

void ModelSpec::validate() const {
    const auto errs = problems();
    if (errs.empty()) return;
    std::ostringstream os;
    os << "invalid model:";
    for (const auto& e : errs) os << "\n  " << e;
    throw ValidationError(os.str());
}

void ModelSpec::check_domain(double a_min, double a_max) const {
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (const auto* hyp = std::get_if<HyperbolicTrajectory>(&levels[i].trajectory)) {
            const double pole = -hyp->scale;
            if (pole >= a_min && pole <= a_max) {
                throw DomainError("level " + std::to_string(i + 1) + ": hyperbolic pole a = " +
                                  std::to_string(pole) + " lies inside the sweep range");
            }
        }
    }
}

std::vector<double> ModelSpec::energies(double a) const {
    std::vector<double> e(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) e[i] = levels[i].energy(a);
    return e;
}

ComplexMatrix build_hamiltonian(const ModelSpec& spec, double a) {
    const std::size_t n = spec.size();
    const auto e = spec.energies(a);
    ComplexMatrix h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = {e[i], -spec.levels[i].gamma_half};
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!spec.coupling.mask.admits(i, j)) continue;
            const cplx w = spec.coupling.element(e[i], e[j]);
            h(i, j) = w;
            h(j, i) = w;
        }
    }
    return h;
}

ChannelCoupling coupling_from_vectors(const std::vector<CVector>& gamma0,
                                      const std::vector<std::vector<double>>& re_part) {
    const std::size_t n = gamma0.size();
    if (n == 0) throw ShapeMismatch("gamma0 has no rows");
    const std::size_t k = gamma0.front().size();
    if (k == 0) throw ShapeMismatch("gamma0 needs at least one channel column");
    for (const auto& row : gamma0) {
        if (row.size() != k) throw ShapeMismatch("gamma0 rows have differing channel counts");
    }
    if (re_part.size() != n) throw ShapeMismatch("re_part must be N x N with N = rows of gamma0");
    for (const auto& row : re_part) {
        if (row.size() != n) throw ShapeMismatch("re_part must be N x N with N = rows of gamma0");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (re_part[i][j] != re_part[j][i]) throw ValidationError("re_part must be symmetric");
        }
    }

    ChannelCoupling out{ComplexMatrix(n), CVector(n)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx sum{};
            for (std::size_t c = 0; c < k; ++c) sum += gamma0[i][c] * gamma0[j][c];
            const cplx w = re_part[i][j] + cplx{0.0, -0.5} * sum;
            if (i == j) {
                out.self_energy[i] = w;
            } else {
                out.offdiagonal(i, j) = w;
            }
        }
    }
    return out;
}

} // namespace epsweep
