#ifndef NAIMARK_BOUNDS_NUMERIC_HPP
#define NAIMARK_BOUNDS_NUMERIC_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace naimark_bounds {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Thrown when a domain invariant is violated (completeness, orthonormality,
/// unit norm, hermiticity). Structural problems (size mismatches, bad
/// arguments) throw std::invalid_argument instead.
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Default numeric tolerances. Operations that check an invariant take the
/// tolerance as a defaulted parameter so callers can tighten or relax it.
namespace tol {
inline constexpr double orthonormal = 1e-10;
inline constexpr double hermitian = 1e-10;
inline constexpr double unitary = 1e-10;
inline constexpr double completeness = 1e-9;
inline constexpr double ket_norm_excess = 1e-12;
inline constexpr double drop_candidate = 1e-8;
inline constexpr double probability_dust = 1e-12;
inline constexpr double distribution_sum = 1e-9;
inline constexpr double soundness_margin = 1e-6;
}  // namespace tol

inline double max_abs(const CMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Largest absolute entry of (m - I); zero for an empty matrix.
inline double deviation_from_identity(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return max_abs(m - CMatrix::Identity(m.rows(), m.cols()));
}

inline bool is_unitary(const CMatrix& m, double tolerance = tol::unitary) {
    if (m.rows() != m.cols()) return false;
    return deviation_from_identity(m.adjoint() * m) <= tolerance;
}

/// Hermitian inner product, conjugate-linear in the first argument.
inline Complex inner_product(const CVector& x, const CVector& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("inner_product: dimension mismatch (" +
                                    std::to_string(x.size()) + " vs " +
                                    std::to_string(y.size()) + ")");
    return x.dot(y);
}

/// Extends a K x d matrix with orthonormal columns to a K x K unitary.
/// The first d columns of the result equal the input exactly; the remaining
/// columns come from orthonormalizing canonical basis vectors against the
/// accepted set, dropping near-dependent candidates. Deterministic.
inline CMatrix complete_to_unitary(const CMatrix& isometry,
                                   double tolerance = tol::orthonormal,
                                   double drop_threshold = tol::drop_candidate) {
    const Eigen::Index rows = isometry.rows();
    const Eigen::Index cols = isometry.cols();
    if (cols < 1 || rows < 1)
        throw std::invalid_argument("complete_to_unitary: empty input");
    if (cols > rows)
        throw std::invalid_argument(
            "complete_to_unitary: more columns than rows (d > K)");
    if (deviation_from_identity(isometry.adjoint() * isometry) > tolerance)
        throw invariant_error(
            "complete_to_unitary: input columns are not orthonormal within "
            "tolerance");

    CMatrix u(rows, rows);
    u.leftCols(cols) = isometry;
    Eigen::Index filled = cols;
    for (Eigen::Index j = 0; j < rows && filled < rows; ++j) {
        CVector w = CVector::Zero(rows);
        w(j) = 1.0;
        // Two projection passes keep the residual orthogonal to working
        // precision even when the candidate is nearly dependent.
        for (int pass = 0; pass < 2; ++pass)
            w -= u.leftCols(filled) * (u.leftCols(filled).adjoint() * w);
        const double norm = w.norm();
        if (norm < drop_threshold) continue;
        u.col(filled++) = w / norm;
    }
    if (filled < rows)
        throw invariant_error(
            "complete_to_unitary: failed to span the full space");
    return u;
}

/// exp(iH) for Hermitian H, through the eigendecomposition. The result is
/// unitary up to eigensolver accuracy.
inline CMatrix exp_i_hermitian(const CMatrix& h,
                               double tolerance = tol::hermitian) {
    if (h.rows() != h.cols())
        throw std::invalid_argument("exp_i_hermitian: matrix must be square");
    if (h.size() == 0) return CMatrix(0, 0);
    if (max_abs(h - h.adjoint()) > tolerance)
        throw invariant_error("exp_i_hermitian: matrix is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    CVector phases(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i)
        phases(i) = std::polar(1.0, es.eigenvalues()(i));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Deterministic sub-stream seed for (seed, stream index) pairs.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x51ED2701ull));
}

/// Standard normal deviates from an explicit Box-Muller transform over
/// mt19937_64 words, so the stream is identical on every platform.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = ((engine_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = (engine_() >> 11) * 0x1.0p-53;        // [0, 1)
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * ((engine_() >> 11) * 0x1.0p-53);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Haar-distributed random unitary: complex Ginibre matrix, QR, then the
/// diagonal phases of R folded into Q (Mezzadri's recipe). Byte-identical
/// for identical (dim, seed).
inline CMatrix haar_random_unitary(int dim, std::uint64_t seed) {
    if (dim < 1)
        throw std::invalid_argument("haar_random_unitary: dim must be >= 1");
    GaussianRng rng(seed);
    CMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(rng.next(), rng.next());
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double mag = std::abs(d);
        q.col(j) *= (mag == 0.0 ? Complex(1.0, 0.0) : d / mag);
    }
    return q;
}

}  // namespace naimark_bounds

#endif  // NAIMARK_BOUNDS_NUMERIC_HPP
