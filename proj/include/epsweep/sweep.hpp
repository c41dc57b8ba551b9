#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "epsweep/linalg.hpp"
#include "epsweep/model.hpp"

namespace epsweep {

/// One eigenpair on a matched branch at one grid point.
struct BranchState {
    cplx value;
    /// Biorthonormalized when `normalized`, otherwise unit 2-norm.
    CVector vector;
    bool normalized = false;
    double rigidity = 1.0;

    double energy() const noexcept { return value.real(); }
    /// Γ/2 = −Im ℰ
    double half_width() const noexcept { return -value.imag(); }
    /// A = Φ†Φ; missing where normalization failed.
    std::optional<double> norm() const;
    /// b_ij (unit basis); missing where normalization failed.
    std::optional<CVector> mixing() const;
};

struct SweepPoint {
    double a = 0.0;
    /// Indexed by branch, not by solver order.
    std::vector<BranchState> branches;
    /// Unperturbed eᵢ(a).
    std::vector<double> unperturbed;
    double residual = 0.0;
};

enum class EventKind { EnergyCrossing, WidthCrossing, AvoidedCrossing, EPCandidate, CriticalRange };

std::string_view to_string(EventKind kind);

struct EventRecord {
    EventKind kind;
    double a_start;
    double a_end;
    std::size_t branch_i;
    std::size_t branch_j;

    double location() const noexcept { return 0.5 * (a_start + a_end); }
};

struct SweepResult {
    ModelSpec spec;
    std::vector<SweepPoint> points;
    std::vector<EventRecord> events;

    std::size_t size() const noexcept { return spec.size(); }
    std::size_t steps() const noexcept { return points.size(); }
    std::vector<double> grid() const;
    std::vector<EventRecord> events_of(EventKind kind) const;
};

struct SweepOptions {
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Solve ℋ(a) on every grid point (in parallel), match branches in one
/// sequential pass, and detect events. Solver failures are rethrown as
/// SweepError carrying the offending a.
SweepResult sweep(const ModelSpec& spec, std::span<const double> grid, SweepOptions options = {});

/// π with cur eigenpair π(i) continuing prev branch i. Maximizes Σ normalized
/// |Φᵢ^prev† Φ_π(i)^cur|; pairs whose overlaps cannot tell a swap apart
/// (gain < kDegenerateOverlap) are resolved by nearest eigenvalue.
std::vector<std::size_t> match_branches(const EigenSystem& prev, const EigenSystem& cur);

inline constexpr double kDegenerateOverlap = 0.05;

/// b_ij = j-th component of Φᵢ in the unperturbed (unit) basis.
CVector mixing_coefficients(std::span<const cplx> vec);
/// Expansion in a real orthonormal basis given as rows φ_j: b_j = φ_jᵀΦ.
CVector mixing_coefficients(std::span<const cplx> vec, const std::vector<std::vector<double>>& basis);

/// Gap below which two trajectories count as touching.
inline constexpr double kCrossingThreshold = 1e-6;

std::vector<EventRecord> detect_crossings(const SweepResult& result);

inline constexpr double kEpRigidity = 0.05;
inline constexpr double kEpGapFactor = 10.0;

/// Grid points with min rigidity < kEpRigidity whose closest eigenvalue pair lies
/// within kEpGapFactor× the local eigenvalue step; each run merged into one
/// candidate placed by interpolating (ℰᵢ − ℰⱼ)² around the rigidity minimum.
std::vector<EventRecord> ep_proximity(const SweepResult& result);

struct WidthSpread {
    /// max Γ − min Γ per grid point
    std::vector<double> spread;
    /// (argmax, argmin) branch per grid point
    std::vector<std::pair<std::size_t, std::size_t>> extremes;
    std::optional<EventRecord> critical_range;
};

inline constexpr double kCriticalFactor = 3.0;

/// Spread of Γ over branches, and the critical range: the maximal interval
/// around the largest spread where it exceeds kCriticalFactor× the endpoint
/// spread (and kCrossingThreshold).
WidthSpread width_bifurcation(const SweepResult& result);

/// Grid indices adjacent to EPs: inside an EPCandidate run or with a failed
/// normalization.
std::vector<bool> ep_adjacent_points(const SweepResult& result);

} // namespace epsweep
