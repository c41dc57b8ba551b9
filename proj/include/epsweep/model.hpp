#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "epsweep/linalg.hpp"

namespace epsweep {

/// e(a) = offset + slope·a
struct LinearTrajectory {
    double offset = 0.0;
    double slope = 0.0;
    friend bool operator==(const LinearTrajectory&, const LinearTrajectory&) = default;
};

/// e(a) = scale / (scale + a)
struct HyperbolicTrajectory {
    double scale = 1.0;
    friend bool operator==(const HyperbolicTrajectory&, const HyperbolicTrajectory&) = default;
};

using Trajectory = std::variant<LinearTrajectory, HyperbolicTrajectory>;

struct LevelSpec {
    Trajectory trajectory;
    /// γᵢ/2, constant in a.
    double gamma_half = 0.0;

    /// Throws DomainError at the hyperbolic pole.
    double energy(double a) const;
    /// εᵢ(a) = eᵢ(a) − (i/2)γᵢ
    cplx epsilon(double a) const;

    friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

/// Levels (0-based) that carry the channel coupling. Empty `levels` with
/// `all == true` means the matrix is full (K = N).
struct ChannelMask {
    bool all = true;
    std::vector<std::size_t> levels;

    static ChannelMask full() { return {}; }
    static ChannelMask only(std::vector<std::size_t> lv) { return {false, std::move(lv)}; }

    bool contains(std::size_t i) const;
    /// Off-diagonal (i, j) is populated iff i or j is in the mask.
    bool admits(std::size_t i, std::size_t j) const { return contains(i) || contains(j); }

    friend bool operator==(const ChannelMask&, const ChannelMask&) = default;
};

struct CouplingSpec {
    cplx omega{};
    bool gaussian = false;
    /// Energy scale of the Gaussian damping exp(−((eᵢ−eⱼ)/width)²).
    double gaussian_width = 1.0;
    ChannelMask mask;

    /// ωᵢⱼ for off-diagonal (i, j) given the two unperturbed energies.
    cplx element(double ei, double ej) const;

    friend bool operator==(const CouplingSpec&, const CouplingSpec&) = default;
};

struct ModelSpec {
    std::vector<LevelSpec> levels;
    CouplingSpec coupling;

    std::size_t size() const noexcept { return levels.size(); }

    /// Structural checks (N ≥ 2, γ ≥ 0, finite values, mask indices in range).
    /// Returns every problem found; empty when valid.
    std::vector<std::string> problems() const;
    /// Throws ValidationError listing all problems.
    void validate() const;
    /// Throws DomainError if a hyperbolic pole lies in [a_min, a_max].
    void check_domain(double a_min, double a_max) const;

    std::vector<double> energies(double a) const;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// ℋ(a): diagonal eᵢ(a) − (i/2)γᵢ, off-diagonals ω (optionally Gaussian-damped)
/// where the channel mask admits them, zero elsewhere. Always symmetric.
ComplexMatrix build_hamiltonian(const ModelSpec& spec, double a);

struct ChannelCoupling {
    /// Off-diagonal external coupling; zero diagonal.
    ComplexMatrix offdiagonal;
    /// Diagonal terms −(i/2)Σ_c γ⁰ᵢ꜀² (+ re_part diagonal), to be folded into εᵢ.
    CVector self_energy;
};

/// Coupling from channel amplitudes γ⁰ (N rows, K columns) and an externally
/// supplied principal-value part: W = re_part − (i/2)·γ⁰·γ⁰ᵀ.
/// For real amplitudes Im W = −½ γ⁰γ⁰ᵀ and Re W = re_part.
ChannelCoupling coupling_from_vectors(const std::vector<CVector>& gamma0,
                                      const std::vector<std::vector<double>>& re_part);

} // namespace epsweep
