#include "epsweep/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "epsweep/assignment.hpp"
#include "epsweep/errors.hpp"

namespace epsweep {

namespace {

double normalized_overlap(const CVector& a, const CVector& b) {
    const double na = norm2(a);
    const double nb = norm2(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::abs(inner(a, b)) / (na * nb);
}

int sign_of(double x) {
    if (x > kCrossingThreshold) return 1;
    if (x < -kCrossingThreshold) return -1;
    return 0;
}

// Crossing events of one difference series s_k (branch i minus branch j).
void sign_change_events(const std::vector<double>& a, const std::vector<double>& s, EventKind kind,
                        std::size_t bi, std::size_t bj, std::vector<EventRecord>& out) {
    std::size_t last = s.size();
    for (std::size_t k = 0; k < s.size(); ++k) {
        const int sk = sign_of(s[k]);
        if (sk == 0) continue;
        if (last != s.size() && sign_of(s[last]) != sk) {
            if (k == last + 1) {
                const double t = s[last] / (s[last] - s[k]);
                const double loc = a[last] + (a[k] - a[last]) * t;
                out.push_back({kind, loc, loc, bi, bj});
            } else {
                out.push_back({kind, a[last + 1], a[k - 1], bi, bj});
            }
        }
        last = k;
    }
}

struct EpFlags {
    std::vector<bool> flagged;
    std::vector<std::pair<std::size_t, std::size_t>> closest; // per point
};

EpFlags compute_ep_flags(const SweepResult& r) {
    const std::size_t steps = r.steps();
    const std::size_t n = r.size();
    EpFlags f{std::vector<bool>(steps, false), std::vector<std::pair<std::size_t, std::size_t>>(steps)};
    for (std::size_t k = 0; k < steps; ++k) {
        const auto& br = r.points[k].branches;
        double rmin = 1.0;
        for (const auto& b : br) rmin = std::min(rmin, b.rigidity);

        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double g = std::abs(br[i].value - br[j].value);
                if (g < gap) {
                    gap = g;
                    f.closest[k] = {i, j};
                }
            }
        }
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (k > 0) scale = std::max(scale, std::abs(br[i].value - r.points[k - 1].branches[i].value));
            if (k + 1 < steps) scale = std::max(scale, std::abs(r.points[k + 1].branches[i].value - br[i].value));
        }
        f.flagged[k] = rmin < kEpRigidity && gap < kEpGapFactor * scale;
    }
    return f;
}

// Minimum of |d0 + t (d1 − d0)| over t in [0, 1].
std::pair<double, double> segment_minimum(cplx d0, cplx d1) {
    const cplx dd = d1 - d0;
    const double den = std::norm(dd);
    double t = den > 0.0 ? -std::real(std::conj(d0) * dd) / den : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return {t, std::abs(d0 + t * dd)};
}

} // namespace

std::optional<double> BranchState::norm() const {
    if (!normalized) return std::nullopt;
    return std::real(inner(vector, vector));
}

std::optional<CVector> BranchState::mixing() const {
    if (!normalized) return std::nullopt;
    return mixing_coefficients(vector);
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
    case EventKind::EnergyCrossing: return "EnergyCrossing";
    case EventKind::WidthCrossing: return "WidthCrossing";
    case EventKind::AvoidedCrossing: return "AvoidedCrossing";
    case EventKind::EPCandidate: return "EPCandidate";
    case EventKind::CriticalRange: return "CriticalRange";
    }
    return "Unknown";
}

std::vector<double> SweepResult::grid() const {
    std::vector<double> g;
    g.reserve(points.size());
    for (const auto& p : points) g.push_back(p.a);
    return g;
}

std::vector<EventRecord> SweepResult::events_of(EventKind kind) const {
    std::vector<EventRecord> out;
    std::copy_if(events.begin(), events.end(), std::back_inserter(out),
                 [kind](const EventRecord& e) { return e.kind == kind; });
    return out;
}

CVector mixing_coefficients(std::span<const cplx> vec) { return CVector(vec.begin(), vec.end()); }

CVector mixing_coefficients(std::span<const cplx> vec, const std::vector<std::vector<double>>& basis) {
    if (basis.size() != vec.size()) throw ShapeMismatch("basis size does not match vector length");
    CVector b(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        if (basis[j].size() != vec.size()) throw ShapeMismatch("basis vectors must have the vector's length");
        cplx s{};
        for (std::size_t m = 0; m < vec.size(); ++m) s += basis[j][m] * vec[m];
        b[j] = s;
    }
    return b;
}

std::vector<std::size_t> match_branches(const EigenSystem& prev, const EigenSystem& cur) {
    const std::size_t n = prev.size();
    if (cur.size() != n) throw ShapeMismatch("cannot match eigensystems of different dimension");
    std::vector<std::vector<double>> overlap(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) overlap[i][j] = normalized_overlap(prev.vectors[i], cur.vectors[j]);
    }
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) cost[i][j] = -overlap[i][j];
    }
    auto perm = solve_assignment(cost);

    // Pairwise repair: where swapping two assignments changes the total overlap
    // by less than the degeneracy margin, the eigenvectors are too close to
    // parallel to decide, so follow the eigenvalues instead.
    bool changed = true;
    for (int pass = 0; changed && pass < 4; ++pass) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const std::size_t pi = perm[i];
                const std::size_t pj = perm[j];
                const double kept = overlap[i][pi] + overlap[j][pj];
                const double swapped = overlap[i][pj] + overlap[j][pi];
                if (std::abs(kept - swapped) >= kDegenerateOverlap) continue;
                const double dk = std::abs(prev.values[i] - cur.values[pi]) + std::abs(prev.values[j] - cur.values[pj]);
                const double ds = std::abs(prev.values[i] - cur.values[pj]) + std::abs(prev.values[j] - cur.values[pi]);
                if (ds < dk) {
                    std::swap(perm[i], perm[j]);
                    changed = true;
                }
            }
        }
    }
    return perm;
}

SweepResult sweep(const ModelSpec& spec, std::span<const double> grid, SweepOptions options) {
    spec.validate();
    if (grid.size() < 2) throw ValidationError("sweep grid needs at least 2 points");
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        if (!(grid[k] < grid[k + 1])) throw ValidationError("sweep grid must be strictly increasing");
    }
    spec.check_domain(grid.front(), grid.back());

    const std::size_t steps = grid.size();
    const std::size_t n = spec.size();
    std::vector<EigenSystem> systems(steps);
    std::vector<std::exception_ptr> failures(steps);

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, steps));
    auto worker = [&](unsigned t) {
        for (std::size_t k = t; k < steps; k += threads) {
            try {
                systems[k] = eigendecompose(build_hamiltonian(spec, grid[k]));
            } catch (...) {
                failures[k] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    }
    for (std::size_t k = 0; k < steps; ++k) {
        if (!failures[k]) continue;
        try {
            std::rethrow_exception(failures[k]);
        } catch (const std::exception& e) {
            throw SweepError(grid[k], e.what());
        }
    }

    // Initial labels follow the unperturbed basis: branch i is the eigenvector
    // with the largest weight on level i, so b_ii dominates at the first point.
    {
        auto& first = systems.front();
        std::vector<std::vector<double>> cost(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double nv = norm2(first.vectors[j]);
                cost[i][j] = -std::abs(first.vectors[j][i]) / (nv > 0.0 ? nv : 1.0);
            }
        }
        const auto perm = solve_assignment(cost);
        EigenSystem ordered = first;
        for (std::size_t i = 0; i < n; ++i) {
            ordered.values[i] = first.values[perm[i]];
            ordered.vectors[i] = first.vectors[perm[i]];
            ordered.normalized[i] = first.normalized[perm[i]];
        }
        first = std::move(ordered);
    }
    for (std::size_t k = 1; k < steps; ++k) {
        const auto perm = match_branches(systems[k - 1], systems[k]);
        EigenSystem ordered = systems[k];
        for (std::size_t i = 0; i < n; ++i) {
            ordered.values[i] = systems[k].values[perm[i]];
            ordered.vectors[i] = systems[k].vectors[perm[i]];
            ordered.normalized[i] = systems[k].normalized[perm[i]];
        }
        systems[k] = std::move(ordered);
    }

    SweepResult result;
    result.spec = spec;
    result.points.resize(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        auto& pt = result.points[k];
        auto& sys = systems[k];
        pt.a = grid[k];
        pt.unperturbed = spec.energies(grid[k]);
        pt.residual = sys.residual;
        pt.branches.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto& b = pt.branches[i];
            b.value = sys.values[i];
            b.vector = std::move(sys.vectors[i]);
            b.normalized = sys.normalized[i];
            b.rigidity = phase_rigidity(b.vector);
        }
    }

    result.events = detect_crossings(result);
    const auto eps = ep_proximity(result);
    result.events.insert(result.events.end(), eps.begin(), eps.end());
    if (auto cr = width_bifurcation(result).critical_range) result.events.push_back(*cr);
    std::stable_sort(result.events.begin(), result.events.end(), [](const EventRecord& x, const EventRecord& y) {
        if (x.a_start != y.a_start) return x.a_start < y.a_start;
        return static_cast<int>(x.kind) < static_cast<int>(y.kind);
    });
    return result;
}

std::vector<EventRecord> detect_crossings(const SweepResult& result) {
    const std::size_t steps = result.steps();
    const std::size_t n = result.size();
    const auto a = result.grid();
    std::vector<EventRecord> out;
    std::vector<double> de(steps), dw(steps);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = 0; k < steps; ++k) {
                const auto& br = result.points[k].branches;
                de[k] = br[i].energy() - br[j].energy();
                dw[k] = br[i].half_width() - br[j].half_width();
            }
            sign_change_events(a, de, EventKind::EnergyCrossing, i, j, out);
            sign_change_events(a, dw, EventKind::WidthCrossing, i, j, out);

            // Avoided crossing: interior local minimum of the energy gap that
            // stays above the crossing threshold with the same sign on both sides.
            constexpr double kNoise = 1e-12;
            for (std::size_t k = 1; k + 1 < steps; ++k) {
                const double g0 = std::abs(de[k - 1]);
                const double g1 = std::abs(de[k]);
                const double g2 = std::abs(de[k + 1]);
                if (g1 <= kCrossingThreshold) continue;
                if (!(g0 - g1 > kNoise && g2 - g1 >= kNoise)) continue;
                if (!(g2 - 2.0 * g1 + g0 > 0.0)) continue;
                const int s = sign_of(de[k]);
                if (sign_of(de[k - 1]) != s || sign_of(de[k + 1]) != s) continue;
                const double h0 = a[k] - a[k - 1];
                const double h1 = a[k + 1] - a[k];
                // Vertex of the parabola through the three samples.
                const double num = h1 * h1 * (g0 - g1) - h0 * h0 * (g2 - g1);
                const double den = h1 * (g0 - g1) + h0 * (g2 - g1);
                double loc = a[k];
                if (den != 0.0) loc = std::clamp(a[k] + 0.5 * num / den, a[k - 1], a[k + 1]);
                out.push_back({EventKind::AvoidedCrossing, loc, loc, i, j});
            }
        }
    }
    return out;
}

std::vector<EventRecord> ep_proximity(const SweepResult& result) {
    const std::size_t steps = result.steps();
    const auto flags = compute_ep_flags(result);
    std::vector<EventRecord> out;
    std::size_t k = 0;
    while (k < steps) {
        if (!flags.flagged[k]) {
            ++k;
            continue;
        }
        std::size_t end = k;
        while (end + 1 < steps && flags.flagged[end + 1]) ++end;

        std::size_t best = k;
        double best_r = 2.0;
        for (std::size_t m = k; m <= end; ++m) {
            for (const auto& b : result.points[m].branches) {
                if (b.rigidity < best_r) {
                    best_r = b.rigidity;
                    best = m;
                }
            }
        }
        const auto [bi, bj] = flags.closest[best];
        auto disc = [&](std::size_t m) {
            const auto& br = result.points[m].branches;
            const cplx d = br[bi].value - br[bj].value;
            return d * d;
        };
        double loc = result.points[best].a;
        double loc_val = std::abs(disc(best));
        for (int side : {-1, 1}) {
            if ((side < 0 && best == 0) || (side > 0 && best + 1 >= steps)) continue;
            const std::size_t lo = side < 0 ? best - 1 : best;
            const std::size_t hi = lo + 1;
            const auto [t, val] = segment_minimum(disc(lo), disc(hi));
            if (val < loc_val) {
                loc_val = val;
                loc = result.points[lo].a + t * (result.points[hi].a - result.points[lo].a);
            }
        }
        out.push_back({EventKind::EPCandidate, loc, loc, std::min(bi, bj), std::max(bi, bj)});
        k = end + 1;
    }
    return out;
}

WidthSpread width_bifurcation(const SweepResult& result) {
    const std::size_t steps = result.steps();
    const std::size_t n = result.size();
    WidthSpread ws;
    ws.spread.resize(steps);
    ws.extremes.resize(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const auto& br = result.points[k].branches;
        std::size_t imax = 0, imin = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (br[i].half_width() > br[imax].half_width()) imax = i;
            if (br[i].half_width() < br[imin].half_width()) imin = i;
        }
        ws.spread[k] = 2.0 * (br[imax].half_width() - br[imin].half_width());
        ws.extremes[k] = {imax, imin};
    }
    if (steps == 0) return ws;
    const double threshold =
        std::max(kCriticalFactor * std::max(ws.spread.front(), ws.spread.back()), kCrossingThreshold);
    const std::size_t peak = static_cast<std::size_t>(
        std::distance(ws.spread.begin(), std::max_element(ws.spread.begin(), ws.spread.end())));
    if (!(ws.spread[peak] > threshold)) return ws;
    std::size_t lo = peak, hi = peak;
    while (lo > 0 && ws.spread[lo - 1] > threshold) --lo;
    while (hi + 1 < steps && ws.spread[hi + 1] > threshold) ++hi;
    const auto [bi, bj] = ws.extremes[peak];
    ws.critical_range =
        EventRecord{EventKind::CriticalRange, result.points[lo].a, result.points[hi].a, std::min(bi, bj), std::max(bi, bj)};
    return ws;
}

std::vector<bool> ep_adjacent_points(const SweepResult& result) {
    auto flags = compute_ep_flags(result).flagged;
    for (std::size_t k = 0; k < result.steps(); ++k) {
        for (const auto& b : result.points[k].branches) {
            if (!b.normalized) flags[k] = true;
        }
    }
    return flags;
}

} // namespace epsweep
