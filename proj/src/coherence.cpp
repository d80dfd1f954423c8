#include "iqcoh/coherence.hpp"

#include <algorithm>
#include <cmath>

namespace iqcoh::coherence {

namespace {

void require_bipartition(const Matrix& rho, const Bipartition& bp) {
    if (bp.dA < 1 || bp.dB < 1 || bp.dA * bp.dB != rho.rows())
        throw DimensionMismatchError("bipartition does not match state dimension");
}

double diag_entropy(const Matrix& rho) {
    return linalg::entropy_of(rho.diagonal().real());
}

/// S(Delta |psi><psi|) without forming the projector.
double pure_dephased_entropy(const Vector& psi) {
    return linalg::entropy_of(psi.cwiseAbs2());
}

/// S(Delta_A Tr_B |psi><psi|) = H of p_i = sum_b |psi_{ib}|^2.
convexroof::ObjectiveFn iq_objective(int dA, int dB) {
    return [dA, dB](const Vector& psi) {
        RealVector p(dA);
        for (int i = 0; i < dA; ++i) p(i) = psi.segment(i * dB, dB).squaredNorm();
        return linalg::entropy_of(p);
    };
}

MeasureReport from_roof(std::string name, const convexroof::RoofResult& r,
                        const convexroof::RoofConfig& cfg) {
    MeasureReport rep;
    rep.measure = std::move(name);
    rep.value = std::max(r.value, 0.0);
    rep.method = Method::RoofSearch;
    rep.bound = r.bound_direction == convexroof::RoofSense::Minimize
                    ? BoundDirection::Upper
                    : BoundDirection::Lower;
    rep.meta.restarts_agreeing = r.restarts_agreeing;
    rep.meta.roof_terms = static_cast<int>(r.best.weights.size());
    (void)cfg;
    return rep;
}

MeasureReport from_sdp(std::string name, double value, const sdp::SdpSolution& sol) {
    if (sol.status == sdp::SdpStatus::MaxIter)
        throw MaxIterationsError("SDP did not converge for " + name);
    MeasureReport rep;
    rep.measure = std::move(name);
    rep.value = std::max(value, 0.0);
    rep.method = Method::Sdp;
    rep.bound = BoundDirection::Exact;
    rep.meta.sdp_iterations = sol.iterations;
    rep.meta.sdp_gap = sol.dual_gap;
    return rep;
}

double cl1_iq_value(const Matrix& rho, const Bipartition& bp) {
    double total = 0.0;
    for (int i = 0; i < bp.dA; ++i)
        for (int j = 0; j < bp.dA; ++j)
            if (i != j) total += linalg::trace_norm(linalg::block(rho, bp.dA, bp.dB, i, j));
    return total;
}

} // namespace

MeasureReport c_l1(const Matrix& rho) {
    linalg::check_state(rho);
    MeasureReport rep{"c_l1", std::max(linalg::l1_norm(rho) - rho.trace().real(), 0.0),
                      Method::ClosedForm, BoundDirection::Exact, {}};
    return rep;
}

MeasureReport c_r(const Matrix& rho) {
    linalg::check_state(rho);
    return {"c_r", std::max(diag_entropy(rho) - linalg::von_neumann_entropy(rho), 0.0),
            Method::ClosedForm, BoundDirection::Exact, {}};
}

MeasureReport c_max(const Matrix& rho, const sdp::SdpOptions& opts) {
    linalg::check_state(rho);
    const sdp::SdpSolution sol = sdp::solve_cover(rho, sdp::Subspace::diagonal(), opts);
    return from_sdp("c_max", std::log2(sol.value), sol);
}

MeasureReport c_f(const Matrix& rho, const convexroof::RoofConfig& cfg) {
    linalg::check_state(rho);
    return from_roof("c_f", convexroof::minimize_roof(rho, pure_dephased_entropy, cfg), cfg);
}

MeasureReport c_a(const Matrix& rho, const convexroof::RoofConfig& cfg) {
    linalg::check_state(rho);
    MeasureReport rep =
        from_roof("c_a", convexroof::maximize_roof(rho, pure_dephased_entropy, cfg), cfg);
    if (rep.value > diag_entropy(rho) + 1e-9)
        throw Error("c_a exceeded its S(Delta(rho)) ceiling; roof engine inconsistency");
    return rep;
}

MeasureReport c_a_reg(const Matrix& rho) {
    linalg::check_state(rho);
    return {"c_a_reg", diag_entropy(rho), Method::ClosedForm, BoundDirection::Exact, {}};
}

MeasureReport c_w(const Matrix& rho, const sdp::SdpOptions& opts) {
    linalg::check_state(rho);
    const sdp::SdpSolution sol = sdp::solve_weight(rho, opts);
    return from_sdp("c_w", 1.0 - sol.value, sol);
}

MeasureReport roc(const Matrix& rho, const sdp::SdpOptions& opts) {
    linalg::check_state(rho);
    const sdp::SdpSolution sol =
        sdp::solve_cover_dual(rho, sdp::Subspace::diagonal(), opts);
    return from_sdp("roc", sol.value - 1.0, sol);
}

MeasureReport cr_iq(const Matrix& rho, const Bipartition& bp) {
    linalg::check_state(rho);
    require_bipartition(rho, bp);
    const Matrix dephased = linalg::dephase(rho, {bp.dA, bp.dB}, {0});
    const double v =
        linalg::von_neumann_entropy(dephased) - linalg::von_neumann_entropy(rho);
    return {"cr_iq", std::max(v, 0.0), Method::ClosedForm, BoundDirection::Exact, {}};
}

MeasureReport cmax_iq(const Matrix& rho, const Bipartition& bp,
                      const sdp::SdpOptions& opts) {
    linalg::check_state(rho);
    require_bipartition(rho, bp);
    const sdp::SdpSolution sol =
        sdp::solve_cover(rho, sdp::Subspace::block_diagonal(bp.dA, bp.dB), opts);
    return from_sdp("cmax_iq", std::log2(sol.value), sol);
}

MeasureReport cmin_iq(const Matrix& rho, const Bipartition& bp) {
    linalg::check_state(rho);
    require_bipartition(rho, bp);
    const Matrix proj = linalg::support_projector(rho);
    double best = 0.0;
    for (int i = 0; i < bp.dA; ++i) {
        const Matrix blk = linalg::block(proj, bp.dA, bp.dB, i, i);
        const linalg::Spectrum es = linalg::eigh(blk);
        best = std::max(best, es.eigenvalues(0));
    }
    if (best <= 1e-15)
        throw InfiniteValueError("cmin_iq: support projector has vanishing A-diagonal blocks");
    return {"cmin_iq", std::max(-std::log2(best), 0.0), Method::ClosedForm,
            BoundDirection::Exact, {}};
}

MeasureReport cl1_iq(const Matrix& rho, const Bipartition& bp) {
    linalg::check_state(rho);
    require_bipartition(rho, bp);
    return {"cl1_iq", cl1_iq_value(rho, bp), Method::ClosedForm, BoundDirection::Exact, {}};
}

MeasureReport cf_iq(const Matrix& rho, const Bipartition& bp,
                    const convexroof::RoofConfig& cfg) {
    linalg::check_state(rho);
    require_bipartition(rho, bp);
    return from_roof(
        "cf_iq", convexroof::minimize_roof(rho, iq_objective(bp.dA, bp.dB), cfg), cfg);
}

MeasureReport ca_iq(const Matrix& rho, const Bipartition& bp,
                    const convexroof::RoofConfig& cfg) {
    linalg::check_state(rho);
    require_bipartition(rho, bp);
    return from_roof(
        "ca_iq", convexroof::maximize_roof(rho, iq_objective(bp.dA, bp.dB), cfg), cfg);
}

MeasureReport q_l1(const Matrix& rho, const Bipartition& bp,
                   const convexroof::RoofConfig& cfg) {
    linalg::check_state(rho);
    require_bipartition(rho, bp);
    const int dA = bp.dA;
    const Matrix eyeB = Matrix::Identity(bp.dB, bp.dB);

    auto objective = [&](const Matrix& uA) {
        const Matrix g = linalg::tensor(uA, eyeB);
        return cl1_iq_value(g * rho * g.adjoint(), bp);
    };

    const Matrix rhoA = linalg::partial_trace(rho, dA, bp.dB, 0);
    const linalg::Spectrum esA = linalg::eigh(rhoA);

    const int restarts = std::max(cfg.restarts, 2);
    double best = 0.0;
    bool have_best = false;
    for (int restart = 0; restart < restarts; ++restart) {
        Rng rng = Rng::stream(cfg.seed ^ 0x51AC0FFEULL, restart);
        Matrix u;
        if (restart == 0) u = Matrix::Identity(dA, dA);
        else if (restart == 1) u = esA.eigenvectors.adjoint();
        else u = states::random_unitary(rng, dA);

        double current = objective(u);
        const double sigma1 = 1e-4;
        for (int t = 0; t < cfg.max_steps && dA > 1; ++t) {
            const double sigma =
                std::pow(sigma1, static_cast<double>(t) / cfg.max_steps);
            const int k = static_cast<int>(rng.uniform(0.0, dA));
            int l = static_cast<int>(rng.uniform(0.0, dA - 1));
            if (l >= k) ++l;
            const double theta = sigma * rng.gaussian();
            const Cx e = std::polar(1.0, rng.uniform(0.0, 2.0 * 3.14159265358979323846));
            Matrix trial = u;
            const Vector rk = trial.row(k).transpose();
            trial.row(k) = std::cos(theta) * rk.transpose() +
                           std::sin(theta) * e * trial.row(l);
            trial.row(l) = -std::sin(theta) * std::conj(e) * rk.transpose() +
                           std::cos(theta) * trial.row(l);
            const double v = objective(trial);
            if (v < current) {
                current = v;
                u = std::move(trial);
            }
        }
        if (!have_best || current < best) {
            best = current;
            have_best = true;
        }
    }

    MeasureReport rep{"q_l1", std::max(best, 0.0), Method::RoofSearch,
                      BoundDirection::Upper, {}};
    return rep;
}

MeasureReport evaluate(const std::string& name, const Matrix& rho,
                       const Bipartition* bp, const convexroof::RoofConfig& roof_cfg,
                       const sdp::SdpOptions& sdp_opts) {
    if (name == "c_l1") return c_l1(rho);
    if (name == "c_r") return c_r(rho);
    if (name == "c_max") return c_max(rho, sdp_opts);
    if (name == "c_f") return c_f(rho, roof_cfg);
    if (name == "c_a") return c_a(rho, roof_cfg);
    if (name == "c_a_reg") return c_a_reg(rho);
    if (name == "c_w") return c_w(rho, sdp_opts);
    if (name == "roc") return roc(rho, sdp_opts);

    const bool bipartite = name == "cr_iq" || name == "cmax_iq" || name == "cmin_iq" ||
                           name == "cl1_iq" || name == "cf_iq" || name == "ca_iq" ||
                           name == "q_l1";
    if (!bipartite) throw UnknownMeasureError("unknown measure: " + name);
    if (bp == nullptr)
        throw DimensionMismatchError("measure " + name + " needs a bipartition");
    if (name == "cr_iq") return cr_iq(rho, *bp);
    if (name == "cmax_iq") return cmax_iq(rho, *bp, sdp_opts);
    if (name == "cmin_iq") return cmin_iq(rho, *bp);
    if (name == "cl1_iq") return cl1_iq(rho, *bp);
    if (name == "cf_iq") return cf_iq(rho, *bp, roof_cfg);
    if (name == "ca_iq") return ca_iq(rho, *bp, roof_cfg);
    return q_l1(rho, *bp, roof_cfg);
}

} // namespace iqcoh::coherence
