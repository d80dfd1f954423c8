#include "iqcoh/convexroof.hpp"

#include <algorithm>
#include <cmath>

#include "iqcoh/rng.hpp"

namespace iqcoh::convexroof {

namespace {

constexpr double kWeightFloor = 1e-14;
constexpr double kAgreeTol = 1e-6;
constexpr double kTwoPi = 6.283185307179586476925286766559;

struct RankedSpectrum {
    RealVector lambda;  // the rank-many positive eigenvalues
    Matrix vectors;     // matching columns
};

RankedSpectrum ranked_spectrum(const Matrix& rho) {
    const linalg::Spectrum es = linalg::eigh(rho);
    const double cutoff = linalg::kRankCutoffRel * std::max(es.eigenvalues(0), 0.0);
    int r = 0;
    while (r < es.eigenvalues.size() && es.eigenvalues(r) > cutoff) ++r;
    if (r == 0) throw NotAStateError("convex roof: input has no positive spectrum");
    return {es.eigenvalues.head(r), es.eigenvectors.leftCols(r)};
}

/// Search state: m unnormalized vectors psi~_k with sum psi~ psi~^dag = rho.
/// Givens proposals touch two of them at a time, so the objective updates
/// incrementally.
struct SearchState {
    std::vector<Vector> psi;      // unnormalized
    std::vector<double> weight;   // squared norms
    std::vector<double> term;     // weight * f(normalized)
    double total = 0.0;

    void refresh_term(int k, const ObjectiveFn& f) {
        weight[k] = psi[k].squaredNorm();
        const double old = term[k];
        term[k] = weight[k] > kWeightFloor
                      ? weight[k] * f(Vector(psi[k] / std::sqrt(weight[k])))
                      : 0.0;
        total += term[k] - old;
    }
};

SearchState initial_state(const RankedSpectrum& spec, int m, const ObjectiveFn& f) {
    const int n = static_cast<int>(spec.vectors.rows());
    const int r = static_cast<int>(spec.lambda.size());
    SearchState s;
    s.psi.assign(m, Vector::Zero(n));
    s.weight.assign(m, 0.0);
    s.term.assign(m, 0.0);
    for (int k = 0; k < r; ++k)
        s.psi[k] = std::sqrt(spec.lambda(k)) * spec.vectors.col(k);
    for (int k = 0; k < m; ++k) s.refresh_term(k, f);
    return s;
}

void apply_givens(SearchState& s, int k, int l, double theta, double phi,
                  const ObjectiveFn& f) {
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    const Cx e = std::polar(1.0, phi);
    const Vector a = s.psi[k];
    s.psi[k] = c * a + sn * e * s.psi[l];
    s.psi[l] = -sn * std::conj(e) * a + c * s.psi[l];
    s.refresh_term(k, f);
    s.refresh_term(l, f);
}

double run_restart(const RankedSpectrum& spec, int m, const ObjectiveFn& f,
                   const RoofConfig& cfg, int restart, bool maximize,
                   SearchState& out) {
    Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(restart));
    SearchState s = initial_state(spec, m, f);

    if (restart > 0 && m > 1) {
        // Scramble away from the eigendecomposition start.
        for (int t = 0; t < 3 * m; ++t) {
            const int k = static_cast<int>(rng.uniform(0.0, m));
            int l = static_cast<int>(rng.uniform(0.0, m - 1));
            if (l >= k) ++l;
            apply_givens(s, k, l, rng.uniform(0.0, kTwoPi), rng.uniform(0.0, kTwoPi), f);
        }
    }

    const double sign = maximize ? -1.0 : 1.0;
    const double sigma0 = 1.0;
    const double sigma1 = std::max(cfg.step_tolerance, 1e-4);
    for (int t = 0; t < cfg.max_steps && m > 1; ++t) {
        const double sigma =
            sigma0 * std::pow(sigma1 / sigma0, static_cast<double>(t) / cfg.max_steps);
        const int k = static_cast<int>(rng.uniform(0.0, m));
        int l = static_cast<int>(rng.uniform(0.0, m - 1));
        if (l >= k) ++l;
        const double theta = sigma * rng.gaussian();
        const double phi = rng.uniform(0.0, kTwoPi);
        const double before = s.total;
        apply_givens(s, k, l, theta, phi, f);
        if (sign * (s.total - before) > 0.0)
            apply_givens(s, k, l, -theta, phi, f);  // revert
    }
    out = std::move(s);
    return out.total;
}

RoofResult extremize(const Matrix& rho, const ObjectiveFn& f, const RoofConfig& cfg,
                     bool maximize) {
    if (cfg.restarts < 1) throw ConfigError("roof: restarts must be >= 1");
    if (cfg.max_steps < 0) throw ConfigError("roof: max_steps must be >= 0");
    const RankedSpectrum spec = ranked_spectrum(rho);
    const int r = static_cast<int>(spec.lambda.size());
    int m = cfg.terms == 0 ? r * r : cfg.terms;
    if (m < r) throw ConfigError("roof: terms must be >= rank");

    const double sign = maximize ? -1.0 : 1.0;
    double best_value = 0.0;
    SearchState best_state;
    std::vector<double> finals(cfg.restarts);
    for (int restart = 0; restart < cfg.restarts; ++restart) {
        SearchState s;
        const double v = run_restart(spec, m, f, cfg, restart, maximize, s);
        finals[restart] = v;
        if (restart == 0 || sign * (v - best_value) < 0.0) {
            best_value = v;
            best_state = std::move(s);
        }
    }

    RoofResult result;
    result.bound_direction = maximize ? RoofSense::Maximize : RoofSense::Minimize;
    result.restarts_agreeing = static_cast<int>(std::count_if(
        finals.begin(), finals.end(),
        [&](double v) { return std::abs(v - best_value) <= kAgreeTol; }));
    for (int k = 0; k < m; ++k) {
        if (best_state.weight[k] <= kWeightFloor) continue;
        result.best.weights.push_back(best_state.weight[k]);
        result.best.states.push_back(best_state.psi[k] / std::sqrt(best_state.weight[k]));
    }
    result.value = result.best.average(f);
    return result;
}

} // namespace

Matrix Decomposition::reconstruct(int dim) const {
    Matrix rho = Matrix::Zero(dim, dim);
    for (std::size_t k = 0; k < weights.size(); ++k)
        rho += weights[k] * states[k] * states[k].adjoint();
    return rho;
}

double Decomposition::average(const ObjectiveFn& f) const {
    double total = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) total += weights[k] * f(states[k]);
    return total;
}

Decomposition enumerate_decomposition(const Matrix& rho, const Matrix& isometry) {
    const RankedSpectrum spec = ranked_spectrum(rho);
    const int r = static_cast<int>(spec.lambda.size());
    if (isometry.cols() != r)
        throw NotIsometryError("enumerate_decomposition: column count differs from rank");
    if ((isometry.adjoint() * isometry - Matrix::Identity(r, r)).norm() > 1e-8)
        throw NotIsometryError("enumerate_decomposition: columns are not orthonormal");

    Decomposition out;
    for (int k = 0; k < isometry.rows(); ++k) {
        Vector psi = Vector::Zero(rho.rows());
        for (int j = 0; j < r; ++j)
            psi += isometry(k, j) * std::sqrt(spec.lambda(j)) * spec.vectors.col(j);
        const double w = psi.squaredNorm();
        if (w <= kWeightFloor) continue;
        out.weights.push_back(w);
        out.states.push_back(psi / std::sqrt(w));
    }
    return out;
}

RoofResult minimize_roof(const Matrix& rho, const ObjectiveFn& f, const RoofConfig& cfg) {
    return extremize(rho, f, cfg, false);
}

RoofResult maximize_roof(const Matrix& rho, const ObjectiveFn& f, const RoofConfig& cfg) {
    return extremize(rho, f, cfg, true);
}

GridExtrema grid_extrema_rank2(const Matrix& rho, const ObjectiveFn& f,
                               double resolution) {
    if (resolution <= 0.0) throw RangeError("grid oracle: resolution must be positive");
    const RankedSpectrum spec = ranked_spectrum(rho);
    const int r = static_cast<int>(spec.lambda.size());
    if (r > 2) throw RankTooHighError("grid oracle: rank exceeds 2");
    if (r == 1) {
        const double v = f(spec.vectors.col(0));
        return {v, v};
    }

    const Vector e1 = std::sqrt(spec.lambda(0)) * spec.vectors.col(0);
    const Vector e2 = std::sqrt(spec.lambda(1)) * spec.vectors.col(1);
    const int n_theta = static_cast<int>(std::ceil(1.5707963267948966 / resolution)) + 1;
    const int n_phi = static_cast<int>(std::ceil(kTwoPi / resolution));

    // Row phases of the mixing unitary change neither weights nor states, so
    // the scan is over the polar angle and one relative column phase.
    GridExtrema out{0.0, 0.0};
    bool first = true;
    Vector buf(rho.rows());
    auto eval = [&](const Vector& psi_tilde) {
        const double w = psi_tilde.squaredNorm();
        if (w <= kWeightFloor) return 0.0;
        buf = psi_tilde / std::sqrt(w);
        return w * f(buf);
    };
    for (int it = 0; it < n_theta; ++it) {
        const double theta =
            std::min(it * resolution, 1.5707963267948966);
        const double c = std::cos(theta);
        const double sn = std::sin(theta);
        for (int ip = 0; ip < n_phi; ++ip) {
            const Cx e = std::polar(1.0, ip * resolution);
            const double total =
                eval(c * e1 + sn * e * e2) + eval(-sn * std::conj(e) * e1 + c * e2);
            if (first || total < out.min_value) out.min_value = total;
            if (first || total > out.max_value) out.max_value = total;
            first = false;
        }
    }
    return out;
}

double grid_oracle_rank2(const Matrix& rho, const ObjectiveFn& f, double resolution,
                         RoofSense sense) {
    const GridExtrema g = grid_extrema_rank2(rho, f, resolution);
    return sense == RoofSense::Minimize ? g.min_value : g.max_value;
}

} // namespace iqcoh::convexroof
