#ifndef IQCOH_LINALG_HPP
#define IQCOH_LINALG_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "iqcoh/errors.hpp"

namespace iqcoh {

using Cx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace linalg {

// Tolerances shared across the kernel.
inline constexpr double kHermTol = 1e-10;
inline constexpr double kStateTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;          // smallest eigenvalue >= -kPsdTol
inline constexpr double kRankCutoffRel = 1e-9;   // lambda > cutoff * lambda_max counts as rank

/// Eigendecomposition carrier: real eigenvalues in descending order,
/// eigenvectors as orthonormal columns in the matching order.
struct Spectrum {
    RealVector eigenvalues;
    Matrix eigenvectors;
};

bool is_hermitian(const Matrix& m, double tol = kHermTol);

/// Hermitian eigendecomposition, descending eigenvalues.
/// Deterministic for a fixed input: each eigenvector's phase is fixed by
/// making its largest-magnitude entry real positive, and near-degenerate
/// eigenvalues are ordered lexicographically by eigenvector entries.
Spectrum eigh(const Matrix& m);

/// Nonnegative singular values, descending.
RealVector svd_values(const Matrix& m);

/// Sum of singular values.
double trace_norm(const Matrix& m);

/// Entrywise absolute sum.
double l1_norm(const Matrix& m);

/// Kronecker product.
Matrix tensor(const Matrix& a, const Matrix& b);

/// Trace out every subsystem not listed in `keep` (indices into `dims`,
/// strictly increasing). The result is ordered by the kept subsystems.
Matrix partial_trace(const Matrix& m, const std::vector<int>& dims,
                     const std::vector<int>& keep);

/// Two-subsystem convenience form: keep = 0 keeps A, keep = 1 keeps B.
Matrix partial_trace(const Matrix& m, int dA, int dB, int keep);

/// Zero every matrix element whose row and column indices differ in any of
/// the target subsystems' reference bases. Idempotent and trace preserving.
Matrix dephase(const Matrix& m, const std::vector<int>& dims,
               const std::vector<int>& targets);

/// Reorder subsystems: perm[k] is the old position of the subsystem that
/// ends up at position k.
Matrix permute_subsystems(const Matrix& m, const std::vector<int>& dims,
                          const std::vector<int>& perm);

/// The dB x dB block <i| m |j>_A of a bipartite operator.
Matrix block(const Matrix& m, int dA, int dB, int i, int j);

/// -Tr(rho log2 rho) in bits; validates that rho is a state.
double von_neumann_entropy(const Matrix& rho);

/// Shannon entropy (bits) of a probability-like vector; negatives below
/// numerical noise are clamped to zero.
double entropy_of(const RealVector& probs);

/// Projector onto the eigenspaces with eigenvalue > kRankCutoffRel * lambda_max.
Matrix support_projector(const Matrix& rho);

int rank_of(const Matrix& rho);

/// Max-relative entropy D_max(rho||sigma) = log2 lambda_max(sigma^{-1/2} rho sigma^{-1/2})
/// on the support of sigma. Throws SupportViolationError when supp(rho) is not
/// contained in supp(sigma).
double d_max(const Matrix& rho, const Matrix& sigma);

/// Min-relative entropy D_min(rho||sigma) = -log2 Tr(Pi_rho sigma).
double d_min(const Matrix& rho, const Matrix& sigma);

/// Purification sqrt(lambda_k) |e_k>|k> on H (x) H; tracing out the second
/// factor recovers rho.
Vector purify(const Matrix& rho);

/// Throws NotAStateError unless m is Hermitian, PSD within kPsdTol and has
/// unit trace within kStateTraceTol.
void check_state(const Matrix& m);

} // namespace linalg
} // namespace iqcoh

#endif
