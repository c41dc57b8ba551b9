#include "epsweep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "epsweep/errors.hpp"

namespace epsweep {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Rotation G = [c s; -conj(s) c] with G·[x; y] = [r; 0], c real.
struct Givens {
    double c;
    cplx s;
};

Givens make_givens(cplx x, cplx y) {
    const double ay = std::abs(y);
    if (ay == 0.0) return {1.0, 0.0};
    const double ax = std::abs(x);
    if (ax == 0.0) return {0.0, std::conj(y) / ay};
    const double nrm = std::hypot(ax, ay);
    return {ax / nrm, (x / ax) * std::conj(y) / nrm};
}

// Householder reduction A = Q H Q†; H overwrites `a`, Q accumulated into `q`
// when non-null.
void reduce_to_hessenberg(ComplexMatrix& a, ComplexMatrix* q) {
    const std::size_t n = a.dim();
    if (n < 3) return;
    CVector v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm = std::hypot(xnorm, std::abs(a(i, k)));
        if (xnorm == 0.0) continue;
        const cplx x0 = a(k + 1, k);
        const cplx phase = std::abs(x0) == 0.0 ? cplx{1.0} : x0 / std::abs(x0);
        const cplx alpha = -phase * xnorm;

        std::fill(v.begin(), v.end(), cplx{});
        v[k + 1] = x0 - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
        double vnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm = std::hypot(vnorm, std::abs(v[i]));
        if (vnorm == 0.0) continue;
        for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

        // A <- (I - 2vv†) A
        for (std::size_t j = 0; j < n; ++j) {
            cplx s{};
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * a(i, j);
            s *= 2.0;
            for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= v[i] * s;
        }
        // A <- A (I - 2vv†)
        for (std::size_t i = 0; i < n; ++i) {
            cplx s{};
            for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
            s *= 2.0;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * std::conj(v[j]);
        }
        if (q) {
            for (std::size_t i = 0; i < n; ++i) {
                cplx s{};
                for (std::size_t j = k + 1; j < n; ++j) s += (*q)(i, j) * v[j];
                s *= 2.0;
                for (std::size_t j = k + 1; j < n; ++j) (*q)(i, j) -= s * std::conj(v[j]);
            }
        }
        a(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
    const cplx half = 0.5 * (a - d);
    const cplx root = std::sqrt(half * half + b * c);
    const cplx mid = 0.5 * (a + d);
    const cplx mu1 = mid + root;
    const cplx mu2 = mid - root;
    return std::abs(mu1 - d) <= std::abs(mu2 - d) ? mu1 : mu2;
}

// Single-shift implicit QR on an upper Hessenberg matrix, driven to upper
// triangular (complex Schur) form. Rotations are applied to the full matrix so
// that the result is a genuine Schur factor, and accumulated into `z` when
// non-null.
void schur_qr(ComplexMatrix& h, ComplexMatrix* z) {
    const std::size_t n = h.dim();
    if (n < 2) return;
    const double hnorm = std::max(h.norm_inf(), std::numeric_limits<double>::min());
    const std::size_t cap = 30 * std::max<std::size_t>(n, 10);
    std::size_t total = 0;
    std::size_t since_deflation = 0;

    std::size_t hi = n - 1;
    while (hi > 0) {
        std::size_t l = hi;
        for (; l > 0; --l) {
            double scale = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
            if (scale == 0.0) scale = hnorm;
            if (std::abs(h(l, l - 1)) <= kEps * scale) {
                h(l, l - 1) = 0.0;
                break;
            }
        }
        if (l == hi) {
            --hi;
            since_deflation = 0;
            continue;
        }
        if (++total > cap) {
            throw ConvergenceFailure("complex QR iteration did not converge after " +
                                     std::to_string(cap) + " sweeps");
        }
        ++since_deflation;

        cplx mu;
        if (since_deflation % 10 == 0) {
            mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
        } else {
            mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        }

        cplx x = h(l, l) - mu;
        cplx y = h(l + 1, l);
        for (std::size_t k = l; k < hi; ++k) {
            if (k > l) {
                x = h(k, k - 1);
                y = h(k + 1, k - 1);
            }
            const auto [c, s] = make_givens(x, y);
            const std::size_t jstart = k > l ? k - 1 : l;
            for (std::size_t j = jstart; j < n; ++j) {
                const cplx t1 = h(k, j);
                const cplx t2 = h(k + 1, j);
                h(k, j) = c * t1 + s * t2;
                h(k + 1, j) = -std::conj(s) * t1 + c * t2;
            }
            if (k > l) h(k + 1, k - 1) = 0.0;
            const std::size_t iend = std::min(k + 2, hi);
            for (std::size_t i = 0; i <= iend; ++i) {
                const cplx t1 = h(i, k);
                const cplx t2 = h(i, k + 1);
                h(i, k) = c * t1 + std::conj(s) * t2;
                h(i, k + 1) = -s * t1 + c * t2;
            }
            if (z) {
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx t1 = (*z)(i, k);
                    const cplx t2 = (*z)(i, k + 1);
                    (*z)(i, k) = c * t1 + std::conj(s) * t2;
                    (*z)(i, k + 1) = -s * t1 + c * t2;
                }
            }
        }
    }
}

void check_finite(const ComplexMatrix& m) {
    if (m.dim() == 0) throw ShapeMismatch("matrix must have dimension >= 1");
    if (!m.all_finite()) throw NonFinite("matrix has a NaN or infinite entry");
}

// Eigenvectors of upper triangular T, one column per diagonal entry.
std::vector<CVector> triangular_eigenvectors(const ComplexMatrix& t) {
    const std::size_t n = t.dim();
    const double small = kEps * std::max(t.norm_inf(), std::numeric_limits<double>::min());
    std::vector<CVector> out(n, CVector(n));
    for (std::size_t k = 0; k < n; ++k) {
        CVector& x = out[k];
        x[k] = 1.0;
        const cplx lambda = t(k, k);
        for (std::size_t jj = k; jj-- > 0;) {
            cplx sum{};
            for (std::size_t m = jj + 1; m <= k; ++m) sum += t(jj, m) * x[m];
            cplx denom = t(jj, jj) - lambda;
            if (std::abs(denom) < small) denom = small;
            x[jj] = -sum / denom;
        }
    }
    return out;
}

void scale_to_unit(CVector& v) {
    const double nrm = norm2(v);
    if (nrm > 0.0) {
        for (auto& z : v) z /= nrm;
    }
}

std::size_t dominant_index(std::span<const cplx> v) {
    double best = 0.0;
    for (const auto& z : v) best = std::max(best, std::abs(z));
    const double cut = best * (1.0 - 1e-12);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) >= cut) return i;
    }
    return 0;
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : n_(rows.size()), data_() {
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
        if (row.size() != n_) throw ShapeMismatch("ComplexMatrix rows must form a square");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

cplx ComplexMatrix::trace() const noexcept {
    cplx t{};
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::norm_inf() const noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n_; ++j) row += std::abs((*this)(i, j));
        best = std::max(best, row);
    }
    return best;
}

bool ComplexMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), finite);
}

bool ComplexMatrix::is_symmetric(double tol) const noexcept {
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
        }
    }
    return true;
}

CVector ComplexMatrix::apply(std::span<const cplx> v) const {
    if (v.size() != n_) throw ShapeMismatch("vector length does not match matrix dimension");
    CVector out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        cplx s{};
        for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

cplx bilinear(std::span<const cplx> v, std::span<const cplx> w) {
    if (v.size() != w.size()) throw ShapeMismatch("vector lengths differ");
    cplx s{};
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * w[i];
    return s;
}

cplx inner(std::span<const cplx> v, std::span<const cplx> w) {
    if (v.size() != w.size()) throw ShapeMismatch("vector lengths differ");
    cplx s{};
    for (std::size_t i = 0; i < v.size(); ++i) s += std::conj(v[i]) * w[i];
    return s;
}

double norm2(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& z : v) s = std::hypot(s, std::abs(z));
    return s;
}

double norm_inf(std::span<const cplx> v) {
    double best = 0.0;
    for (const auto& z : v) best = std::max(best, std::abs(z));
    return best;
}

bool EigenSystem::fully_normalized() const noexcept {
    return std::all_of(normalized.begin(), normalized.end(), [](bool b) { return b; });
}

CVector eigenvalues(const ComplexMatrix& m) {
    check_finite(m);
    ComplexMatrix h = m;
    reduce_to_hessenberg(h, nullptr);
    schur_qr(h, nullptr);
    CVector values(h.dim());
    for (std::size_t i = 0; i < h.dim(); ++i) values[i] = h(i, i);
    return values;
}

EigenSystem eigendecompose(const ComplexMatrix& m) {
    check_finite(m);
    const std::size_t n = m.dim();
    ComplexMatrix t = m;
    ComplexMatrix z = ComplexMatrix::identity(n);
    reduce_to_hessenberg(t, &z);
    schur_qr(t, &z);

    EigenSystem sys;
    sys.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) sys.values[i] = t(i, i);

    const auto tri = triangular_eigenvectors(t);
    sys.vectors.assign(n, CVector(n));
    for (std::size_t k = 0; k < n; ++k) {
        auto& v = sys.vectors[k];
        for (std::size_t i = 0; i < n; ++i) {
            cplx s{};
            for (std::size_t j = 0; j <= k; ++j) s += z(i, j) * tri[k][j];
            v[i] = s;
        }
        scale_to_unit(v);
    }

    // Exactly degenerate, non-defective eigenvalues do not come out mutually
    // T-orthogonal automatically; Gram-Schmidt them in the bilinear form.
    const double cluster_tol = 1e-12 * std::max(m.norm_inf(), 1.0);
    sys.normalized.assign(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        auto& v = sys.vectors[k];
        for (std::size_t i = 0; i < k; ++i) {
            if (!sys.normalized[i] || std::abs(sys.values[i] - sys.values[k]) > cluster_tol) continue;
            const cplx proj = bilinear(sys.vectors[i], v);
            for (std::size_t j = 0; j < n; ++j) v[j] -= proj * sys.vectors[i][j];
        }
        try {
            v = biorthonormalize(v);
            sys.normalized[k] = true;
        } catch (const SelfOrthogonal&) {
            scale_to_unit(v);
        }
    }

    double residual = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const CVector hv = m.apply(sys.vectors[k]);
        for (std::size_t i = 0; i < n; ++i) {
            residual = std::max(residual, std::abs(hv[i] - sys.values[k] * sys.vectors[k][i]));
        }
    }
    sys.residual = residual;
    return sys;
}

CVector biorthonormalize(std::span<const cplx> v) {
    const double nn = std::real(inner(v, v));
    if (!std::isfinite(nn)) throw NonFinite("vector has a NaN or infinite component");
    if (nn == 0.0) throw SelfOrthogonal("zero vector cannot be biorthonormalized");
    const cplx tt = bilinear(v, v);
    if (std::abs(tt) / nn < kSelfOrthogonalTol) {
        throw SelfOrthogonal("vector is self-orthogonal (|vᵀv|/v†v = " +
                             std::to_string(std::abs(tt) / nn) + ")");
    }
    const cplx root = std::sqrt(tt);
    CVector out(v.begin(), v.end());
    for (auto& c : out) c /= root;
    const cplx lead = out[dominant_index(out)];
    if (lead.real() < 0.0 || (lead.real() == 0.0 && lead.imag() < 0.0)) {
        for (auto& c : out) c = -c;
    }
    return out;
}

std::vector<CVector> biorthonormalize(const std::vector<CVector>& vectors) {
    std::vector<CVector> out;
    out.reserve(vectors.size());
    for (const auto& v : vectors) out.push_back(biorthonormalize(v));
    return out;
}

double phase_rigidity(std::span<const cplx> v) {
    const double nn = std::real(inner(v, v));
    if (!std::isfinite(nn)) throw NonFinite("vector has a NaN or infinite component");
    if (nn == 0.0) throw ZeroVector("phase rigidity of the zero vector is undefined");
    return std::min(1.0, std::abs(bilinear(v, v)) / nn);
}

Overlap overlap_offdiag(std::span<const cplx> vi, std::span<const cplx> vj) {
    const cplx value = inner(vi, vj);
    if (!finite(value)) throw NonFinite("overlap of non-finite vectors");
    return {value, std::abs(value.real()) > 1e-8};
}

} // namespace epsweep
