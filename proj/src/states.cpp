#include "iqcoh/states.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace iqcoh::states {

using nlohmann::json;

QuantumState validate(Matrix rho, std::vector<int> dims) {
    int total = 1;
    for (int d : dims) {
        if (d < 1) throw DimensionMismatchError("validate: nonpositive subsystem dimension");
        total *= d;
    }
    if (rho.rows() != total || rho.cols() != total)
        throw DimensionMismatchError("validate: product of dims does not match matrix size");
    linalg::check_state(rho);
    return QuantumState{std::move(rho), std::move(dims)};
}

QuantumState from_vector(const Vector& psi, std::vector<int> dims) {
    const double n = psi.norm();
    if (std::abs(n - 1.0) > 1e-10)
        throw NormalizationError("from_vector: state vector is not normalized");
    return validate(psi * psi.adjoint(), std::move(dims));
}

QuantumState bell_phi_plus() {
    Vector psi = Vector::Zero(4);
    psi(0) = 1.0 / std::sqrt(2.0);
    psi(3) = -1.0 / std::sqrt(2.0);
    return from_vector(psi, {2, 2});
}

QuantumState psi_plus() {
    Vector psi = Vector::Zero(4);
    psi(1) = 1.0 / std::sqrt(2.0);
    psi(2) = -1.0 / std::sqrt(2.0);
    return from_vector(psi, {2, 2});
}

QuantumState rho_lambda(double lambda) {
    if (lambda < 0.0 || lambda > 1.0)
        throw RangeError("rho_lambda: lambda outside [0, 1]");
    const QuantumState phi = bell_phi_plus();
    const QuantumState psi = psi_plus();
    return validate(lambda * phi.rho + (1.0 - lambda) * psi.rho, {2, 2});
}

QuantumState schmidt_pure(const std::vector<double>& probs,
                          const std::vector<Vector>& local_states) {
    if (probs.empty() || probs.size() != local_states.size())
        throw DimensionMismatchError("schmidt_pure: probs and local states differ in length");
    double total = 0.0;
    for (double p : probs) {
        if (p < -1e-12) throw NormalizationError("schmidt_pure: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-10)
        throw NormalizationError("schmidt_pure: probabilities do not sum to 1");
    const int dA = static_cast<int>(probs.size());
    const int dB = static_cast<int>(local_states[0].size());
    Vector psi = Vector::Zero(dA * dB);
    for (int i = 0; i < dA; ++i) {
        if (local_states[i].size() != dB)
            throw DimensionMismatchError("schmidt_pure: local states differ in dimension");
        if (std::abs(local_states[i].norm() - 1.0) > 1e-10)
            throw NormalizationError("schmidt_pure: local state is not normalized");
        psi.segment(i * dB, dB) = std::sqrt(std::max(probs[i], 0.0)) * local_states[i];
    }
    return from_vector(psi, {dA, dB});
}

Vector sample_haar_pure(Rng& rng, int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.cgaussian();
    v /= v.norm();
    return v;
}

Matrix sample_ginibre(Rng& rng, int dim, int rank) {
    if (rank < 1 || rank > dim) throw RangeError("sample_ginibre: rank outside [1, dim]");
    Matrix g(dim, rank);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < rank; ++j) g(i, j) = rng.cgaussian();
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

std::vector<double> sample_dirichlet(Rng& rng, int n) {
    std::vector<double> w(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        while (u <= 0.0) u = rng.uniform();
        w[i] = -std::log(u);
        total += w[i];
    }
    for (double& x : w) x /= total;
    return w;
}

Matrix sample_random_iq(Rng& rng, int dA, int dB) {
    const std::vector<double> q = sample_dirichlet(rng, dA);
    Matrix rho = Matrix::Zero(dA * dB, dA * dB);
    for (int i = 0; i < dA; ++i)
        rho.block(i * dB, i * dB, dB, dB) = q[i] * sample_ginibre(rng, dB, dB);
    return rho;
}

Matrix sample_random_incoherent(Rng& rng, int dim) {
    const std::vector<double> q = sample_dirichlet(rng, dim);
    Matrix rho = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) rho(i, i) = q[i];
    return rho;
}

Matrix random_unitary(Rng& rng, int dim) {
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.cgaussian();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the diagonal phases so the distribution is Haar.
    for (int j = 0; j < dim; ++j) {
        const Cx d = r(j, j);
        q.col(j) *= std::abs(d) > 0 ? d / std::abs(d) : Cx(1.0);
    }
    return q;
}

std::vector<QuantumState> sample(const EnsembleSpec& spec) {
    if (spec.count < 1) throw RangeError("sample: count must be >= 1");
    int total = 1;
    for (int d : spec.dims) total *= d;
    if (total < 1) throw RangeError("sample: empty dims");
    std::vector<QuantumState> out;
    out.reserve(spec.count);
    for (int i = 0; i < spec.count; ++i) {
        Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(i));
        switch (spec.kind) {
            case EnsembleKind::HaarPure:
                out.push_back(from_vector(sample_haar_pure(rng, total), spec.dims));
                break;
            case EnsembleKind::GinibreMixed: {
                const int r = spec.rank > 0 ? spec.rank : total;
                if (r > total) throw RangeError("sample: rank exceeds dimension");
                out.push_back(validate(sample_ginibre(rng, total, r), spec.dims));
                break;
            }
            case EnsembleKind::RandomIq: {
                if (spec.dims.size() < 2)
                    throw RangeError("sample: random-iq needs a bipartite dims pattern");
                const int dA = spec.dims.front();
                out.push_back(validate(sample_random_iq(rng, dA, total / dA), spec.dims));
                break;
            }
            case EnsembleKind::RandomIncoherent:
                out.push_back(validate(sample_random_incoherent(rng, total), spec.dims));
                break;
        }
    }
    return out;
}

std::string to_json(const QuantumState& state) {
    json j;
    j["dims"] = state.dims;
    json rows = json::array();
    for (int r = 0; r < state.rho.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < state.rho.cols(); ++c)
            row.push_back({state.rho(r, c).real(), state.rho(r, c).imag()});
        rows.push_back(row);
    }
    j["matrix"] = rows;
    return j.dump(2);
}

QuantumState from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("state file is not valid JSON: ") + e.what());
    }
    try {
        std::vector<int> dims = j.at("dims").get<std::vector<int>>();
        const auto& rows = j.at("matrix");
        const int n = static_cast<int>(rows.size());
        Matrix rho(n, n);
        for (int r = 0; r < n; ++r) {
            if (static_cast<int>(rows[r].size()) != n)
                throw ParseError("state file matrix is not square");
            for (int c = 0; c < n; ++c)
                rho(r, c) = Cx(rows[r][c][0].get<double>(), rows[r][c][1].get<double>());
        }
        return validate(std::move(rho), std::move(dims));
    } catch (const json::exception& e) {
        throw ParseError(std::string("state file schema mismatch: ") + e.what());
    }
}

void save(const QuantumState& state, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("save: cannot open " + path);
    out << to_json(state) << '\n';
    if (!out) throw IoError("save: write failed for " + path);
}

QuantumState load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

} // namespace iqcoh::states
