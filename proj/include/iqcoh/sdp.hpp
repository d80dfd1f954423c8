#ifndef IQCOH_SDP_HPP
#define IQCOH_SDP_HPP

#include "iqcoh/linalg.hpp"

namespace iqcoh::sdp {

/// The admissible matrix subspaces: diagonal in the reference basis, or
/// block-diagonal with respect to the A factor of a dA x dB bipartition
/// (the support structure of incoherent-quantum states).
struct Subspace {
    enum Kind { Diagonal, BlockDiagonalA } kind = Diagonal;
    int dA = 0; // used by BlockDiagonalA
    int dB = 0;

    static Subspace diagonal() { return {Diagonal, 0, 0}; }
    static Subspace block_diagonal(int dA, int dB) { return {BlockDiagonalA, dA, dB}; }

    /// Orthogonal projection onto the subspace (zero the excluded entries).
    Matrix project(const Matrix& m) const;
};

struct SdpOptions {
    double tol = 1e-8;       // primal residual, dual residual and duality gap
    int max_iter = 50000;
    double mu = 1.0;         // initial ADMM penalty
    double relax = 1.7;      // over-relaxation
};

enum class SdpStatus { Optimal, MaxIter, Infeasible };

struct SdpSolution {
    double value = 0.0;        // primal objective at the feasible primal point
    Matrix primal;             // feasible point (exactly in the subspace for cover)
    Matrix dual;               // feasible dual certificate matrix
    double dual_value = 0.0;   // objective of the dual certificate
    double dual_gap = 0.0;     // |value - dual_value|
    int iterations = 0;
    SdpStatus status = SdpStatus::Optimal;
};

/// min Tr X  s.t.  X >= rho, X in subspace.
/// 2^{C_max} of rho with respect to the subspace's state cone.
SdpSolution solve_cover(const Matrix& rho, const Subspace& subspace,
                        const SdpOptions& options = {});

/// Independent route to the same optimum through the dual problem
/// max Tr(rho tau)  s.t.  tau >= 0, P_S(tau) = I.
SdpSolution solve_cover_dual(const Matrix& rho, const Subspace& subspace,
                             const SdpOptions& options = {});

/// max Tr D  s.t.  0 <= D <= rho, D diagonal. Coherence weight is 1 - value.
SdpSolution solve_weight(const Matrix& rho, const SdpOptions& options = {});

/// Feasible dual objective for a solved cover problem. Recomputed from the
/// stored certificate; primal value - result lies in [0, gap tolerance]
/// whenever the status is Optimal.
double dual_certificate(const Matrix& rho, const Subspace& subspace,
                        const SdpSolution& solution);

/// Projection onto {M : M >= 0} by eigenvalue clamping.
Matrix psd_project(const Matrix& m);

} // namespace iqcoh::sdp

#endif
