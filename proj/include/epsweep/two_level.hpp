#pragma once

#include <utility>
#include <vector>

#include "epsweep/linalg.hpp"
#include "epsweep/model.hpp"

namespace epsweep::two_level {

struct Input {
    cplx eps1;
    cplx eps2;
    cplx omega;
};

/// Z = ½√((ε₁−ε₂)² + 4ω²) on the principal branch (Re ≥ 0, Im ≥ 0 on the cut).
cplx z_value(const Input& in);

/// ((ε₁+ε₂)/2 + Z, (ε₁+ε₂)/2 − Z)
std::pair<cplx, cplx> eigenvalues_closed(const Input& in);

enum class Regime {
    ZReal,      ///< |e₁−e₂| > 2x: energy repulsion
    ZImaginary, ///< |e₁−e₂| < 2x: width bifurcation
    AtEP,       ///< |e₁−e₂| = 2x
};

struct EpCondition {
    enum class Kind {
        NoRealEP,      ///< real ω: (e₁−e₂)² + 4x² > 0 never vanishes
        ImaginaryPair, ///< ω = ix: EPs at e₁ − e₂ = ±2x
    };
    Kind kind;
    /// x for ω = ix, or the real coupling for NoRealEP.
    double x;

    /// The two values of e₁ − e₂ at which Z = 0 (empty for NoRealEP).
    std::vector<double> ep_differences() const;
    /// Classifier for a given level distance e₁ − e₂ (ImaginaryPair only).
    Regime regime(double energy_difference) const;
};

/// Analytic EP classification for equal widths. Throws NotApplicable unless
/// `gamma_equal` and ω is purely real or purely imaginary.
EpCondition ep_condition(bool gamma_equal, cplx omega);

/// F(a) = (ε₁(a) − ε₂(a))² + 4ω(a)², whose zeros are the EPs (Z = F^½/2).
cplx discriminant(const ModelSpec& spec, double a);

/// All a in [a_min, a_max] with Z(a) = 0 for a 2-level spec. Sign changes of
/// Re F and Im F are scanned on `scan_points` samples, bisected to machine
/// precision, and kept where |F| is negligible.
std::vector<double> ep_parameter_roots(const ModelSpec& spec, double a_min, double a_max,
                                       std::size_t scan_points = 20001);

} // namespace epsweep::two_level
