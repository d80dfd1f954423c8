#include "iqcoh/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace iqcoh::linalg {

namespace {

int product(const std::vector<int>& dims) {
    int p = 1;
    for (int d : dims) p *= d;
    return p;
}

// Decompose a flat index into per-subsystem digits (most significant first).
void unravel(int index, const std::vector<int>& dims, std::vector<int>& out) {
    out.resize(dims.size());
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

int ravel(const std::vector<int>& digits, const std::vector<int>& dims) {
    int index = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) index = index * dims[k] + digits[k];
    return index;
}

} // namespace

bool is_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

Spectrum eigh(const Matrix& m) {
    if (!is_hermitian(m)) throw NonHermitianError("eigh: matrix is not Hermitian within tolerance");
    const Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    const int n = static_cast<int>(h.rows());

    Spectrum s;
    s.eigenvalues.resize(n);
    s.eigenvectors.resize(n, n);
    // Eigen returns ascending order; flip to descending.
    for (int k = 0; k < n; ++k) {
        s.eigenvalues(k) = solver.eigenvalues()(n - 1 - k);
        s.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    }
    // Canonical phase: largest-magnitude entry real positive.
    for (int k = 0; k < n; ++k) {
        int imax = 0;
        double amax = 0.0;
        for (int i = 0; i < n; ++i) {
            const double a = std::abs(s.eigenvectors(i, k));
            if (a > amax + 1e-14) { amax = a; imax = i; }
        }
        const Cx pivot = s.eigenvectors(imax, k);
        if (std::abs(pivot) > 0) s.eigenvectors.col(k) *= std::conj(pivot) / std::abs(pivot);
    }
    // Deterministic order inside near-degenerate groups.
    const double scale = std::max(1.0, s.eigenvalues.cwiseAbs().maxCoeff());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (std::abs(s.eigenvalues(a) - s.eigenvalues(b)) > 1e-12 * scale)
            return s.eigenvalues(a) > s.eigenvalues(b);
        for (int i = 0; i < n; ++i) {
            const Cx va = s.eigenvectors(i, a), vb = s.eigenvectors(i, b);
            if (std::abs(va.real() - vb.real()) > 1e-12) return va.real() > vb.real();
            if (std::abs(va.imag() - vb.imag()) > 1e-12) return va.imag() > vb.imag();
        }
        return false;
    });
    Spectrum out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (int k = 0; k < n; ++k) {
        out.eigenvalues(k) = s.eigenvalues(order[k]);
        out.eigenvectors.col(k) = s.eigenvectors.col(order[k]);
    }
    return out;
}

RealVector svd_values(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues();
}

double trace_norm(const Matrix& m) { return svd_values(m).sum(); }

double l1_norm(const Matrix& m) { return m.cwiseAbs().sum(); }

Matrix tensor(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix partial_trace(const Matrix& m, const std::vector<int>& dims,
                     const std::vector<int>& keep) {
    const int total = product(dims);
    if (m.rows() != total || m.cols() != total)
        throw DimensionMismatchError("partial_trace: dims do not match matrix size");
    for (std::size_t k = 0; k < keep.size(); ++k) {
        if (keep[k] < 0 || keep[k] >= static_cast<int>(dims.size()))
            throw DimensionMismatchError("partial_trace: bad subsystem index");
        if (k > 0 && keep[k] <= keep[k - 1])
            throw DimensionMismatchError("partial_trace: keep list must be strictly increasing");
    }
    std::vector<int> traced;
    std::vector<int> kept_dims, traced_dims;
    for (int s = 0; s < static_cast<int>(dims.size()); ++s) {
        if (std::find(keep.begin(), keep.end(), s) == keep.end()) {
            traced.push_back(s);
            traced_dims.push_back(dims[s]);
        } else {
            kept_dims.push_back(dims[s]);
        }
    }
    const int dk = product(kept_dims);
    const int dt = product(traced_dims);
    Matrix out = Matrix::Zero(dk, dk);

    std::vector<int> kr, kc, tt, full_r(dims.size()), full_c(dims.size());
    for (int r = 0; r < dk; ++r) {
        unravel(r, kept_dims, kr);
        for (int c = 0; c < dk; ++c) {
            unravel(c, kept_dims, kc);
            Cx acc = 0.0;
            for (int t = 0; t < dt; ++t) {
                unravel(t, traced_dims, tt);
                for (std::size_t k = 0; k < keep.size(); ++k) {
                    full_r[keep[k]] = kr[k];
                    full_c[keep[k]] = kc[k];
                }
                for (std::size_t k = 0; k < traced.size(); ++k) {
                    full_r[traced[k]] = tt[k];
                    full_c[traced[k]] = tt[k];
                }
                acc += m(ravel(full_r, dims), ravel(full_c, dims));
            }
            out(r, c) = acc;
        }
    }
    return out;
}

Matrix partial_trace(const Matrix& m, int dA, int dB, int keep) {
    return partial_trace(m, {dA, dB}, {keep});
}

Matrix dephase(const Matrix& m, const std::vector<int>& dims,
               const std::vector<int>& targets) {
    const int total = product(dims);
    if (m.rows() != total || m.cols() != total)
        throw DimensionMismatchError("dephase: dims do not match matrix size");
    for (int t : targets)
        if (t < 0 || t >= static_cast<int>(dims.size()))
            throw DimensionMismatchError("dephase: bad target subsystem");
    Matrix out = m;
    std::vector<int> dr, dc;
    for (int r = 0; r < total; ++r) {
        unravel(r, dims, dr);
        for (int c = 0; c < total; ++c) {
            unravel(c, dims, dc);
            for (int t : targets) {
                if (dr[t] != dc[t]) {
                    out(r, c) = 0.0;
                    break;
                }
            }
        }
    }
    return out;
}

Matrix permute_subsystems(const Matrix& m, const std::vector<int>& dims,
                          const std::vector<int>& perm) {
    const int total = product(dims);
    if (m.rows() != total || m.cols() != total || perm.size() != dims.size())
        throw DimensionMismatchError("permute_subsystems: inconsistent input");
    std::vector<int> new_dims(dims.size());
    for (std::size_t k = 0; k < perm.size(); ++k) new_dims[k] = dims[perm[k]];
    Matrix out(total, total);
    std::vector<int> nr, nc, orow(dims.size()), ocol(dims.size());
    for (int r = 0; r < total; ++r) {
        unravel(r, new_dims, nr);
        for (std::size_t k = 0; k < perm.size(); ++k) orow[perm[k]] = nr[k];
        for (int c = 0; c < total; ++c) {
            unravel(c, new_dims, nc);
            for (std::size_t k = 0; k < perm.size(); ++k) ocol[perm[k]] = nc[k];
            out(r, c) = m(ravel(orow, dims), ravel(ocol, dims));
        }
    }
    return out;
}

Matrix block(const Matrix& m, int dA, int dB, int i, int j) {
    if (m.rows() != dA * dB || m.cols() != dA * dB)
        throw DimensionMismatchError("block: dims do not match matrix size");
    if (i < 0 || i >= dA || j < 0 || j >= dA)
        throw IndexOutOfRangeError("block: index outside A dimension");
    return m.block(i * dB, j * dB, dB, dB);
}

void check_state(const Matrix& m) {
    if (m.rows() != m.cols()) throw NotAStateError("state matrix is not square");
    if (!is_hermitian(m)) throw NotAStateError("state matrix is not Hermitian");
    if (std::abs(m.trace().real() - 1.0) > kStateTraceTol || std::abs(m.trace().imag()) > kStateTraceTol)
        throw NotAStateError("state trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()));
    if (solver.eigenvalues().minCoeff() < -kPsdTol)
        throw NotAStateError("state has a negative eigenvalue beyond tolerance");
}

double entropy_of(const RealVector& probs) {
    double h = 0.0;
    for (int k = 0; k < probs.size(); ++k) {
        const double p = probs(k);
        if (p > 1e-300) h -= p * std::log2(p);
    }
    return h;
}

double von_neumann_entropy(const Matrix& rho) {
    if (rho.rows() != rho.cols() || !is_hermitian(rho))
        throw NotAStateError("von_neumann_entropy: not a Hermitian square matrix");
    const Spectrum s = eigh(rho);
    if (s.eigenvalues.minCoeff() < -1e-10)
        throw NotAStateError("von_neumann_entropy: negative eigenvalue");
    if (std::abs(s.eigenvalues.sum() - 1.0) > kStateTraceTol)
        throw NotAStateError("von_neumann_entropy: trace differs from 1");
    return entropy_of(s.eigenvalues);
}

Matrix support_projector(const Matrix& rho) {
    if (!is_hermitian(rho)) throw NonHermitianError("support_projector: not Hermitian");
    const Spectrum s = eigh(rho);
    const double lmax = s.eigenvalues.size() ? s.eigenvalues(0) : 0.0;
    Matrix proj = Matrix::Zero(rho.rows(), rho.cols());
    if (lmax <= 0.0) return proj;
    const double cutoff = kRankCutoffRel * lmax;
    for (int k = 0; k < s.eigenvalues.size(); ++k)
        if (s.eigenvalues(k) > cutoff)
            proj += s.eigenvectors.col(k) * s.eigenvectors.col(k).adjoint();
    return proj;
}

int rank_of(const Matrix& rho) {
    const Spectrum s = eigh(rho);
    const double lmax = s.eigenvalues.size() ? s.eigenvalues(0) : 0.0;
    if (lmax <= 0.0) return 0;
    int r = 0;
    for (int k = 0; k < s.eigenvalues.size(); ++k)
        if (s.eigenvalues(k) > kRankCutoffRel * lmax) ++r;
    return r;
}

double d_max(const Matrix& rho, const Matrix& sigma) {
    const Spectrum ss = eigh(sigma);
    const double lmax = ss.eigenvalues.maxCoeff();
    const double cutoff = lmax > 0 ? kRankCutoffRel * lmax : 0.0;

    // Support condition: rho must vanish outside supp(sigma).
    Matrix outside = Matrix::Identity(sigma.rows(), sigma.cols());
    for (int k = 0; k < ss.eigenvalues.size(); ++k)
        if (ss.eigenvalues(k) > cutoff)
            outside -= ss.eigenvectors.col(k) * ss.eigenvectors.col(k).adjoint();
    if ((outside * rho * outside).cwiseAbs().maxCoeff() > 1e-8)
        throw SupportViolationError("d_max: supp(rho) not contained in supp(sigma)");

    Matrix inv_sqrt = Matrix::Zero(sigma.rows(), sigma.cols());
    for (int k = 0; k < ss.eigenvalues.size(); ++k)
        if (ss.eigenvalues(k) > cutoff)
            inv_sqrt += (1.0 / std::sqrt(ss.eigenvalues(k))) *
                        ss.eigenvectors.col(k) * ss.eigenvectors.col(k).adjoint();
    const Matrix m = inv_sqrt * rho * inv_sqrt;
    const Spectrum ms = eigh(0.5 * (m + m.adjoint()));
    return std::log2(std::max(ms.eigenvalues.maxCoeff(), 1e-300));
}

double d_min(const Matrix& rho, const Matrix& sigma) {
    const Matrix proj = support_projector(rho);
    const double overlap = (proj * sigma).trace().real();
    if (overlap <= 1e-15)
        throw InfiniteValueError("d_min: Tr(Pi_rho sigma) vanishes");
    return -std::log2(overlap);
}

Vector purify(const Matrix& rho) {
    check_state(rho);
    const Spectrum s = eigh(rho);
    const int d = static_cast<int>(rho.rows());
    Vector psi = Vector::Zero(d * d);
    const double cutoff = kRankCutoffRel * std::max(s.eigenvalues.maxCoeff(), 0.0);
    for (int k = 0; k < d; ++k) {
        if (s.eigenvalues(k) <= cutoff) continue;
        const double c = std::sqrt(s.eigenvalues(k));
        for (int i = 0; i < d; ++i) psi(i * d + k) += c * s.eigenvectors(i, k);
    }
    return psi;
}

} // namespace iqcoh::linalg
