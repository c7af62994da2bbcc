#ifndef NAIMARK_BOUNDS_MEASUREMENT_HPP
#define NAIMARK_BOUNDS_MEASUREMENT_HPP

#include "naimark_bounds/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace naimark_bounds {

/// Unit-norm ket. Mixed states are out of scope: the bounds are
/// state-universal and entropy minima over density operators are attained at
/// pure states.
class PureState {
public:
    explicit PureState(CVector ket, double tolerance = tol::orthonormal)
        : ket_(std::move(ket)) {
        if (ket_.size() < 1)
            throw std::invalid_argument("PureState: dimension must be positive");
        if (!ket_.allFinite())
            throw invariant_error("PureState: entries must be finite");
        if (std::abs(ket_.norm() - 1.0) > tolerance)
            throw invariant_error("PureState: ket must have unit norm");
    }

    static PureState basis_state(int dim, int index) {
        if (index < 0 || index >= dim)
            throw std::invalid_argument("PureState: basis index out of range");
        CVector v = CVector::Zero(dim);
        v(index) = 1.0;
        return PureState(std::move(v));
    }

    /// Normalizes an arbitrary nonzero vector.
    static PureState normalized(const CVector& v) {
        const double n = v.norm();
        if (!(n > 0.0) || !v.allFinite())
            throw std::invalid_argument("PureState: cannot normalize zero or non-finite vector");
        return PureState(v / n);
    }

    const CVector& ket() const { return ket_; }
    int dim() const { return static_cast<int>(ket_.size()); }

private:
    CVector ket_;
};

/// Rank-1 POVM: K sub-normalized kets whose outer products sum to the
/// identity on C^d. Immutable after construction.
class Rank1Povm {
public:
    Rank1Povm(int dim, std::vector<CVector> kets,
              double completeness_tolerance = tol::completeness)
        : dim_(dim), kets_(std::move(kets)) {
        if (dim_ < 1)
            throw std::invalid_argument("Rank1Povm: dimension must be positive");
        if (static_cast<int>(kets_.size()) < dim_)
            throw invariant_error("Rank1Povm: needs at least d outcomes (K >= d)");
        CMatrix sum = CMatrix::Zero(dim_, dim_);
        for (const CVector& m : kets_) {
            if (m.size() != dim_)
                throw std::invalid_argument("Rank1Povm: ket dimension mismatch");
            if (!m.allFinite())
                throw invariant_error("Rank1Povm: ket entries must be finite");
            if (m.squaredNorm() > 1.0 + tol::ket_norm_excess)
                throw invariant_error("Rank1Povm: ket norm exceeds 1");
            sum += m * m.adjoint();
        }
        if ((sum - CMatrix::Identity(dim_, dim_)).norm() > completeness_tolerance)
            throw invariant_error(
                "Rank1Povm: completeness violated (outer products do not sum to identity)");
    }

    int dim() const { return dim_; }
    int outcomes() const { return static_cast<int>(kets_.size()); }
    const std::vector<CVector>& kets() const { return kets_; }
    const CVector& ket(int k) const { return kets_.at(k); }

    bool is_pvm(double tolerance = tol::orthonormal) const {
        if (outcomes() != dim_) return false;
        for (int k = 0; k < dim_; ++k)
            for (int l = 0; l < dim_; ++l) {
                const Complex g = kets_[k].dot(kets_[l]);
                if (std::abs(g - (k == l ? 1.0 : 0.0)) > tolerance) return false;
            }
        return true;
    }

private:
    int dim_;
    std::vector<CVector> kets_;
};

/// Non-degenerate projective measurement: a rank-1 POVM with K = d and
/// orthonormal kets.
class Pvm {
public:
    explicit Pvm(Rank1Povm povm, double tolerance = tol::orthonormal)
        : povm_(std::move(povm)) {
        if (povm_.outcomes() != povm_.dim())
            throw invariant_error("Pvm: outcome count must equal dimension");
        if (!povm_.is_pvm(tolerance))
            throw invariant_error("Pvm: kets are not pairwise orthonormal");
    }

    /// Builds a PVM from the columns of a matrix with orthonormal columns.
    static Pvm from_columns(const CMatrix& basis) {
        if (basis.rows() != basis.cols())
            throw std::invalid_argument("Pvm: basis matrix must be square");
        std::vector<CVector> kets;
        kets.reserve(basis.cols());
        for (Eigen::Index k = 0; k < basis.cols(); ++k) kets.push_back(basis.col(k));
        return Pvm(Rank1Povm(static_cast<int>(basis.rows()), std::move(kets)));
    }

    const Rank1Povm& povm() const { return povm_; }
    int dim() const { return povm_.dim(); }
    const CVector& ket(int k) const { return povm_.ket(k); }

private:
    Rank1Povm povm_;
};

/// Probabilities of measurement outcomes. Floating dust in [-1e-12, 0) is
/// clamped to zero; anything further outside [0, 1] is rejected.
class OutcomeDistribution {
public:
    explicit OutcomeDistribution(std::vector<double> probabilities,
                                 double sum_tolerance = tol::distribution_sum)
        : probabilities_(std::move(probabilities)) {
        double sum = 0.0;
        for (double& p : probabilities_) {
            if (!std::isfinite(p) || p < -tol::probability_dust ||
                p > 1.0 + tol::probability_dust)
                throw invariant_error("OutcomeDistribution: probability outside [0, 1]");
            p = std::clamp(p, 0.0, 1.0);
            sum += p;
        }
        if (std::abs(sum - 1.0) > sum_tolerance)
            throw invariant_error("OutcomeDistribution: probabilities do not sum to 1");
    }

    const std::vector<double>& probabilities() const { return probabilities_; }
    int size() const { return static_cast<int>(probabilities_.size()); }

private:
    std::vector<double> probabilities_;
};

/// Born rule: p_k = |<m_k|psi>|^2.
inline OutcomeDistribution outcome_distribution(const Rank1Povm& povm,
                                                const PureState& state) {
    if (povm.dim() != state.dim())
        throw std::invalid_argument("outcome_distribution: dimension mismatch");
    std::vector<double> p(povm.outcomes());
    for (int k = 0; k < povm.outcomes(); ++k)
        p[k] = std::norm(povm.ket(k).dot(state.ket()));
    return OutcomeDistribution(std::move(p));
}

/// Shannon entropy in bits, with 0 log 0 = 0.
inline double shannon_entropy(const OutcomeDistribution& dist) {
    double h = 0.0;
    for (double p : dist.probabilities())
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

/// POVM realized by measuring one of two PVMs with equal probability:
/// {a_k/sqrt(2)} followed by {b_l/sqrt(2)}, 2d outcomes in total.
inline Rank1Povm mixed_pvm_povm(const Pvm& a, const Pvm& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("mixed_pvm_povm: dimension mismatch");
    const double scale = 1.0 / std::numbers::sqrt2;
    std::vector<CVector> kets;
    kets.reserve(2 * a.dim());
    for (int k = 0; k < a.dim(); ++k) kets.push_back(scale * a.ket(k));
    for (int l = 0; l < b.dim(); ++l) kets.push_back(scale * b.ket(l));
    return Rank1Povm(a.dim(), std::move(kets));
}

/// Returns (H(union POVM), 1 + [H(A)+H(B)]/2) evaluated on the same state.
/// The two sides agree to within 1e-10 for every valid input.
inline std::pair<double, double> entropy_identity_check(const Pvm& a, const Pvm& b,
                                                        const PureState& state) {
    const Rank1Povm mixed = mixed_pvm_povm(a, b);
    const double lhs = shannon_entropy(outcome_distribution(mixed, state));
    const double ha = shannon_entropy(outcome_distribution(a.povm(), state));
    const double hb = shannon_entropy(outcome_distribution(b.povm(), state));
    return {lhs, 1.0 + 0.5 * (ha + hb)};
}

/// Random rank-1 POVM: the kets are the conjugated rows of the first d
/// columns of a Haar-random K x K unitary, so completeness holds by
/// construction. Deterministic for a fixed seed.
inline Rank1Povm random_rank1_povm(int dim, int outcomes, std::uint64_t seed) {
    if (outcomes < dim)
        throw std::invalid_argument("random_rank1_povm: requires K >= d");
    const CMatrix u = haar_random_unitary(outcomes, seed);
    std::vector<CVector> kets(outcomes);
    for (int k = 0; k < outcomes; ++k)
        kets[k] = u.row(k).head(dim).conjugate().transpose();
    return Rank1Povm(dim, std::move(kets));
}

inline PureState random_pure_state(int dim, std::uint64_t seed) {
    return PureState(haar_random_unitary(dim, seed).col(0));
}

// Canonical desk-scale instances.

inline Pvm pauli_z_basis() {
    return Pvm::from_columns(CMatrix::Identity(2, 2));
}

inline Pvm pauli_x_basis() {
    CMatrix b(2, 2);
    const double s = 1.0 / std::numbers::sqrt2;
    b << s, s, s, -s;
    return Pvm::from_columns(b);
}

inline Pvm pauli_y_basis() {
    CMatrix b(2, 2);
    const double s = 1.0 / std::numbers::sqrt2;
    b << Complex(s, 0), Complex(s, 0), Complex(0, s), Complex(0, -s);
    return Pvm::from_columns(b);
}

/// Three-outcome qubit POVM with real kets at 0, 60 and 120 degrees scaled
/// by sqrt(2/3); the minimal nontrivial Naimark case (ancilla dimension 1).
inline Rank1Povm trine_povm() {
    const double scale = std::sqrt(2.0 / 3.0);
    std::vector<CVector> kets(3);
    for (int k = 0; k < 3; ++k) {
        const double angle = k * std::numbers::pi / 3.0;
        CVector m(2);
        m << scale * std::cos(angle), scale * std::sin(angle);
        kets[k] = m;
    }
    return Rank1Povm(2, std::move(kets));
}

}  // namespace naimark_bounds

#endif  // NAIMARK_BOUNDS_MEASUREMENT_HPP
