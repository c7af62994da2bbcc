#ifndef NAIMARK_BOUNDS_NAIMARK_HPP
#define NAIMARK_BOUNDS_NAIMARK_HPP

#include "naimark_bounds/measurement.hpp"

#include <utility>
#include <vector>

namespace naimark_bounds {

/// Orthonormal basis of the extended space C^K whose restriction to the
/// first d coordinates reproduces a rank-1 POVM. Column k of basis() is the
/// extended ket for outcome k; coordinates 0..d-1 are the system block and
/// d..K-1 the ancilla block.
class NaimarkExtension {
public:
    NaimarkExtension(CMatrix basis_columns, int system_dim,
                     double tolerance = tol::orthonormal)
        : basis_(std::move(basis_columns)), system_dim_(system_dim) {
        if (basis_.rows() != basis_.cols())
            throw std::invalid_argument("NaimarkExtension: basis must be square");
        if (system_dim_ < 1 || system_dim_ > basis_.rows())
            throw std::invalid_argument("NaimarkExtension: invalid system dimension");
        if (deviation_from_identity(basis_.adjoint() * basis_) > tolerance)
            throw invariant_error("NaimarkExtension: basis is not orthonormal");
    }

    int total_dim() const { return static_cast<int>(basis_.rows()); }  // K
    int system_dim() const { return system_dim_; }                     // d
    int ancilla_dim() const { return total_dim() - system_dim_; }      // K - d

    const CMatrix& basis() const { return basis_; }
    CVector basis_vector(int k) const { return basis_.col(k); }

    /// d x K block: column k is the system part of the extended ket k.
    CMatrix system_block() const { return basis_.topRows(system_dim_); }
    /// (K-d) x K block: column k is the ancilla part of the extended ket k.
    CMatrix ancilla_block() const { return basis_.bottomRows(ancilla_dim()); }

private:
    CMatrix basis_;
    int system_dim_;
};

/// Unitary acting on the ancilla block only; the implied operator on the
/// extended space is I_d (+) W. Block-diagonal form is what keeps the
/// restriction to system states intact, and two independent extension
/// rotations collapse to a single W, so this one matrix spans the full
/// extension freedom.
class AncillaUnitary {
public:
    explicit AncillaUnitary(CMatrix w, double tolerance = tol::unitary)
        : w_(std::move(w)) {
        if (w_.rows() != w_.cols())
            throw std::invalid_argument("AncillaUnitary: matrix must be square");
        if (w_.size() > 0 && !is_unitary(w_, tolerance))
            throw invariant_error("AncillaUnitary: matrix is not unitary");
    }

    static AncillaUnitary identity(int ancilla_dim) {
        return AncillaUnitary(CMatrix::Identity(ancilla_dim, ancilla_dim));
    }

    int dim() const { return static_cast<int>(w_.rows()); }
    const CMatrix& matrix() const { return w_; }

private:
    CMatrix w_;
};

/// Minimal Naimark extension (K = number of outcomes). The K x d matrix
/// whose column i holds conj(m_k[i]) down rows k has orthonormal columns by
/// completeness; completing it to a K x K unitary and conjugating its rows
/// yields the extended basis. The completion is canonical and seed-free, so
/// the same POVM always dilates to the same extension.
inline NaimarkExtension dilate(const Rank1Povm& povm) {
    const int k_total = povm.outcomes();
    const int d = povm.dim();
    CMatrix isometry(k_total, d);
    for (int k = 0; k < k_total; ++k)
        isometry.row(k) = povm.ket(k).conjugate().transpose();
    CMatrix u;
    try {
        u = complete_to_unitary(isometry, tol::completeness);
    } catch (const invariant_error&) {
        throw invariant_error("dilate: POVM completeness violated beyond tolerance");
    }
    // m-tilde_k is the conjugated row k of u, i.e. column k of u^dagger.
    return NaimarkExtension(u.adjoint(), d);
}

/// Maps every basis vector by I_d (+) W. The system blocks are untouched, so
/// outcome probabilities for system states are preserved exactly.
inline NaimarkExtension apply_ancilla_unitary(const NaimarkExtension& ext,
                                              const AncillaUnitary& w) {
    if (w.dim() != ext.ancilla_dim())
        throw std::invalid_argument(
            "apply_ancilla_unitary: ancilla dimension mismatch");
    CMatrix basis = ext.basis();
    if (w.dim() > 0)
        basis.bottomRows(w.dim()) = w.matrix() * basis.bottomRows(w.dim());
    return NaimarkExtension(std::move(basis), ext.system_dim());
}

/// Entry (k, l) = <m~_k| (I_d (+) W) |n~_l>. For two extensions of the same
/// pair of POVMs this is the matrix whose largest magnitude drives the
/// strengthened bounds; it is unitary, so entries lie in [0, 1].
inline CMatrix overlap_matrix(const NaimarkExtension& ext_m,
                              const NaimarkExtension& ext_n,
                              const AncillaUnitary& w) {
    if (ext_m.total_dim() != ext_n.total_dim() ||
        ext_m.system_dim() != ext_n.system_dim())
        throw std::invalid_argument("overlap_matrix: extension size mismatch");
    if (w.dim() != ext_m.ancilla_dim())
        throw std::invalid_argument("overlap_matrix: ancilla dimension mismatch");
    CMatrix overlap =
        ext_m.system_block().adjoint() * ext_n.system_block();
    if (w.dim() > 0)
        overlap += ext_m.ancilla_block().adjoint() *
                   (w.matrix() * ext_n.ancilla_block());
    return overlap;
}

/// Appends zero kets until the POVM has target_outcomes outcomes.
/// Zero-probability outcomes leave every Shannon entropy unchanged; padding
/// only aligns extension dimensions when two POVMs differ in K.
inline Rank1Povm pad_povm(const Rank1Povm& povm, int target_outcomes) {
    if (target_outcomes < povm.outcomes())
        throw std::invalid_argument("pad_povm: target is smaller than outcome count");
    std::vector<CVector> kets = povm.kets();
    kets.resize(target_outcomes, CVector::Zero(povm.dim()));
    return Rank1Povm(povm.dim(), std::move(kets));
}

}  // namespace naimark_bounds

#endif  // NAIMARK_BOUNDS_NAIMARK_HPP
