#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace epsweep {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t n);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const cplx> d);

    std::size_t dim() const noexcept { return n_; }

    cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

    cplx trace() const noexcept;
    /// Maximum absolute row sum.
    double norm_inf() const noexcept;
    bool all_finite() const noexcept;
    bool is_symmetric(double tol = 0.0) const noexcept;

    CVector apply(std::span<const cplx> v) const;

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<cplx> data_;
};

/// vᵀw, no conjugation.
cplx bilinear(std::span<const cplx> v, std::span<const cplx> w);
/// v†w.
cplx inner(std::span<const cplx> v, std::span<const cplx> w);
double norm2(std::span<const cplx> v);
double norm_inf(std::span<const cplx> v);

struct EigenSystem {
    CVector values;
    /// Right eigenvectors, biorthonormalized (ΦᵢᵀΦⱼ = δᵢⱼ) wherever `normalized[i]`.
    /// A vector that could not be normalized (self-orthogonal at an EP) is
    /// returned with unit 2-norm and `normalized[i] == false`.
    std::vector<CVector> vectors;
    std::vector<bool> normalized;
    /// max over i of ‖HΦᵢ − ℰᵢΦᵢ‖∞
    double residual = 0.0;

    std::size_t size() const noexcept { return values.size(); }
    bool fully_normalized() const noexcept;
};

/// Full eigendecomposition of a general complex matrix: Householder reduction to
/// Hessenberg form, single-shift QR to Schur form, eigenvectors by triangular
/// back-substitution. Vectors are then biorthonormalized, which assumes `m`
/// is complex symmetric (left eigenvectors = transposed right ones).
///
/// Throws NonFinite for NaN/Inf entries and ConvergenceFailure when the QR
/// iteration exceeds its cap.
EigenSystem eigendecompose(const ComplexMatrix& m);

/// Eigenvalues only, same QR machinery.
CVector eigenvalues(const ComplexMatrix& m);

/// Relative threshold on |vᵀv|/(v†v) below which a vector counts as self-orthogonal.
inline constexpr double kSelfOrthogonalTol = 1e-7;

/// Scales Φ to ΦᵀΦ = 1 and fixes the sign so that the largest-magnitude
/// component has positive real part (lowest index wins ties).
/// Throws SelfOrthogonal when |ΦᵀΦ| / Φ†Φ < kSelfOrthogonalTol.
CVector biorthonormalize(std::span<const cplx> v);
std::vector<CVector> biorthonormalize(const std::vector<CVector>& vectors);

/// |vᵀv| / (v†v) in [0, 1]; equals 1/A for a biorthonormalized vector.
double phase_rigidity(std::span<const cplx> v);

struct Overlap {
    cplx value;
    /// |Re Φᵢ†Φⱼ| exceeded 1e-8; for a biorthonormal pair of a complex symmetric
    /// matrix the overlap should be purely imaginary.
    bool real_part_warning = false;
};

/// Φᵢ†Φⱼ for i ≠ j.
Overlap overlap_offdiag(std::span<const cplx> vi, std::span<const cplx> vj);

} // namespace epsweep
