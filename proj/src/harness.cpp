#include "iqcoh/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <thread>

#include <nlohmann/json.hpp>

namespace iqcoh::harness {

namespace {

using coherence::Bipartition;

double binary_entropy(double p) {
    RealVector v(2);
    v << p, 1.0 - p;
    return linalg::entropy_of(v);
}

double diag_entropy(const Matrix& rho) {
    return linalg::entropy_of(rho.diagonal().real());
}

// Measure shorthands (plain values).
double cr(const Matrix& rho) { return coherence::c_r(rho).value; }
double cl1(const Matrix& rho) { return coherence::c_l1(rho).value; }
double cr_iq_v(const Matrix& rho, int dA, int dB) {
    return coherence::cr_iq(rho, {dA, dB}).value;
}
double cl1_iq_v(const Matrix& rho, int dA, int dB) {
    return coherence::cl1_iq(rho, {dA, dB}).value;
}
double cmin_iq_v(const Matrix& rho, int dA, int dB) {
    return coherence::cmin_iq(rho, {dA, dB}).value;
}
double cmax_iq_v(const Matrix& rho, int dA, int dB) {
    return coherence::cmax_iq(rho, {dA, dB}).value;
}

// Pure-state objectives for roofs and oracles.
double f_dephase(const Vector& psi) { return linalg::entropy_of(psi.cwiseAbs2()); }

convexroof::ObjectiveFn f_iq(int dA, int dB) {
    return [dA, dB](const Vector& psi) {
        RealVector p(dA);
        for (int i = 0; i < dA; ++i) p(i) = psi.segment(i * dB, dB).squaredNorm();
        return linalg::entropy_of(p);
    };
}

convexroof::ObjectiveFn f_reduction(int dA, int dB) {
    return [dA, dB](const Vector& psi) {
        Matrix m(dA, dB);
        for (int i = 0; i < dA; ++i) m.row(i) = psi.segment(i * dB, dB).transpose();
        return linalg::entropy_of(linalg::svd_values(m).cwiseAbs2());
    };
}

struct RoofWithOracle {
    double value;
    double oracle_dev;  // one-sided slack vs the exhaustive 2-term grid
};

// The grid scans 2-term decompositions exhaustively, but the true roof on a
// rank-2 support generically needs 3 terms (Caratheodory on the Bloch ball),
// so the search may legitimately beat the grid. Convergence is therefore
// checked one-sidedly: the optimizer must do at least as well as brute force.
RoofWithOracle checked_roof(const Matrix& rho, const convexroof::ObjectiveFn& f,
                            bool maximize, const convexroof::RoofConfig& cfg) {
    const convexroof::RoofResult r =
        maximize ? convexroof::maximize_roof(rho, f, cfg)
                 : convexroof::minimize_roof(rho, f, cfg);
    const double oracle = convexroof::grid_oracle_rank2(
        rho, f, 0.02,
        maximize ? convexroof::RoofSense::Maximize : convexroof::RoofSense::Minimize);
    const double slack =
        maximize ? std::max(0.0, oracle - r.value) : std::max(0.0, r.value - oracle);
    return {r.value, slack};
}

Matrix haar_state(Rng& rng, int dim) {
    const Vector psi = states::sample_haar_pure(rng, dim);
    return psi * psi.adjoint();
}

/// Pure qubit state with the given Bloch vector (must be unit length).
Vector bloch_state(double x, double y, double z) {
    const double ct = std::clamp(z, -1.0, 1.0);
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    Vector psi(2);
    psi(0) = std::sqrt((1.0 + ct) / 2.0);
    psi(1) = std::sqrt((1.0 - ct) / 2.0);
    if (st > 1e-15) psi(1) *= Cx(x, y) / st;  // e^{i phi}, phi = arg(x + i y)
    return psi;
}

// ---- suite trial functions: return the violation margin for one trial ----

struct SuiteContext {
    const SuiteSpec& spec;
    int trial;
    convexroof::RoofConfig roof_cfg;

    Rng rng() const { return Rng::stream(spec.seed, static_cast<std::uint64_t>(trial)); }
    bool rank2_mode() const { return spec.ensemble == "rank2"; }
};

double thm1_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    if (!ctx.rank2_mode()) {
        const Matrix rho = haar_state(rng, 4);
        const Matrix rhoA = linalg::partial_trace(rho, 2, 2, 0);
        const Matrix rhoB = linalg::partial_trace(rho, 2, 2, 1);
        const double lhs = diag_entropy(rho);  // C_f of a pure state
        const double ef = linalg::von_neumann_entropy(rhoA);
        const double rhs = std::max(cr(rhoA) + qubit_cf(rhoB), cr(rhoB) + qubit_cf(rhoA)) + ef;
        const double viol = rhs - lhs;

        // Equality construction: psi = sum_i sqrt(p_i) |i>|u_i> built from an
        // optimal C_f decomposition of a random qubit rho_B.
        const Matrix sigmaB = states::sample_ginibre(rng, 2, 2);
        const auto decomp = qubit_cf_optimal_decomposition(sigmaB);
        std::vector<double> probs;
        std::vector<Vector> locals;
        for (const auto& [w, u] : decomp) {
            probs.push_back(w);
            locals.push_back(u);
        }
        const QuantumState psi = states::schmidt_pure(probs, locals);
        const Matrix psiA = linalg::partial_trace(psi.rho, 2, 2, 0);
        const double lhs_eq = diag_entropy(psi.rho);
        const double rhs_eq =
            cr(psiA) + qubit_cf(sigmaB) + linalg::von_neumann_entropy(psiA);
        return std::max(viol, std::abs(lhs_eq - rhs_eq));
    }

    const Matrix rho = states::sample_ginibre(rng, 4, 2);
    const Matrix rhoA = linalg::partial_trace(rho, 2, 2, 0);
    const Matrix rhoB = linalg::partial_trace(rho, 2, 2, 1);
    const RoofWithOracle cf = checked_roof(rho, f_dephase, false, ctx.roof_cfg);
    const RoofWithOracle ef = checked_roof(rho, f_reduction(2, 2), false, ctx.roof_cfg);
    const double rhs =
        std::max(cr(rhoA) + qubit_cf(rhoB), cr(rhoB) + qubit_cf(rhoA)) + ef.value;
    const double viol = rhs - cf.value;
    const double oracle_pen =
        std::max(cf.oracle_dev, ef.oracle_dev) - ctx.spec.tiers.roof;
    return std::max(viol, oracle_pen);
}

double thm2_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    if (!ctx.rank2_mode()) {
        const Matrix rho = haar_state(rng, 4);
        const Matrix rhoA = linalg::partial_trace(rho, 2, 2, 0);
        const Matrix rhoB = linalg::partial_trace(rho, 2, 2, 1);
        const double ca_ab = diag_entropy(rhoA);   // C_a^{A|B} of a pure state
        const double ca_joint = diag_entropy(rho); // C_a of a pure state
        const double caA = diag_entropy(rhoA);     // qubit C_a = S(Delta rho)
        const double caB = diag_entropy(rhoB);
        const double ea = linalg::von_neumann_entropy(rhoA);
        return std::max({ca_ab - (caA + ea), ca_joint - (ca_ab + caB),
                         ca_joint - (caA + caB + ea)});
    }

    const Matrix rho = states::sample_ginibre(rng, 4, 2);
    const Matrix rhoA = linalg::partial_trace(rho, 2, 2, 0);
    const Matrix rhoB = linalg::partial_trace(rho, 2, 2, 1);
    const RoofWithOracle ca_ab = checked_roof(rho, f_iq(2, 2), true, ctx.roof_cfg);
    const RoofWithOracle ca_joint = checked_roof(rho, f_dephase, true, ctx.roof_cfg);
    const RoofWithOracle ea = checked_roof(rho, f_reduction(2, 2), true, ctx.roof_cfg);
    const double caA = diag_entropy(rhoA);
    const double caB = diag_entropy(rhoB);
    const double viol =
        std::max({ca_ab.value - (caA + ea.value), ca_joint.value - (ca_ab.value + caB),
                  ca_joint.value - (caA + caB + ea.value)});
    const double oracle_pen =
        std::max({ca_ab.oracle_dev, ca_joint.oracle_dev, ea.oracle_dev}) -
        ctx.spec.tiers.roof;
    return std::max(viol, oracle_pen);
}

double lem2_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    if (!ctx.rank2_mode()) {
        const Matrix rho = haar_state(rng, 4);
        const Matrix rhoA = linalg::partial_trace(rho, 2, 2, 0);
        const double lhs = diag_entropy(rhoA);  // C_f^{A|B} of a pure state
        return cr(rhoA) + linalg::von_neumann_entropy(rhoA) - lhs;
    }
    const Matrix rho = states::sample_ginibre(rng, 4, 2);
    const Matrix rhoA = linalg::partial_trace(rho, 2, 2, 0);
    const RoofWithOracle cf_ab = checked_roof(rho, f_iq(2, 2), false, ctx.roof_cfg);
    const RoofWithOracle ef = checked_roof(rho, f_reduction(2, 2), false, ctx.roof_cfg);
    const double viol = cr(rhoA) + ef.value - cf_ab.value;
    return std::max(viol,
                    std::max(cf_ab.oracle_dev, ef.oracle_dev) - ctx.spec.tiers.roof);
}

double lem3_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    if (!ctx.rank2_mode()) {
        const Matrix rho = haar_state(rng, 4);
        const Matrix rhoA = linalg::partial_trace(rho, 2, 2, 0);
        const Matrix rhoB = linalg::partial_trace(rho, 2, 2, 1);
        return diag_entropy(rhoA) + qubit_cf(rhoB) - diag_entropy(rho);
    }
    const Matrix rho = states::sample_ginibre(rng, 4, 2);
    const Matrix rhoB = linalg::partial_trace(rho, 2, 2, 1);
    const RoofWithOracle cf_joint = checked_roof(rho, f_dephase, false, ctx.roof_cfg);
    const RoofWithOracle cf_ab = checked_roof(rho, f_iq(2, 2), false, ctx.roof_cfg);
    const double viol = cf_ab.value + qubit_cf(rhoB) - cf_joint.value;
    return std::max(
        viol, std::max(cf_joint.oracle_dev, cf_ab.oracle_dev) - ctx.spec.tiers.roof);
}

double lem1_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    const Matrix rho = states::sample_ginibre(rng, 8, 8);
    const std::vector<int> dims{2, 2, 2};
    const Matrix rho_ab = linalg::partial_trace(rho, dims, {0, 1});
    const Matrix rho_ac = linalg::partial_trace(rho, dims, {0, 2});
    const double lhs = cr_iq_v(rho, 2, 4) - cr_iq_v(rho_ab, 2, 2) - cr_iq_v(rho_ac, 2, 2);
    const double rhs = -entanglement::conditional_entropy(rho, dims, {0}, {1, 2}) +
                       entanglement::conditional_entropy(rho, dims, {0}, {1}) +
                       entanglement::conditional_entropy(rho, dims, {0}, {2});
    return lhs - rhs;
}

double prop1_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    const Matrix rho = haar_state(rng, 8);
    const std::vector<int> dims{2, 2, 2};
    const Matrix rho_ab = linalg::partial_trace(rho, dims, {0, 1});
    const Matrix rho_ac = linalg::partial_trace(rho, dims, {0, 2});
    const double sB =
        linalg::von_neumann_entropy(linalg::partial_trace(rho, dims, {1}));
    const double sC =
        linalg::von_neumann_entropy(linalg::partial_trace(rho, dims, {2}));
    return std::abs(cr_iq_v(rho_ab, 2, 2) - cr_iq_v(rho_ac, 2, 2) - (sB - sC));
}

double prop_l1max_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    std::vector<int> dims = ctx.spec.dims.empty() ? std::vector<int>{2, 2} : ctx.spec.dims;
    const int dA = dims[0], dB = dims[1];
    const Matrix rho = states::sample_ginibre(rng, dA * dB, dA * dB);
    const double l1 = cl1_iq_v(rho, dA, dB);
    const double two_cmax = std::exp2(cmax_iq_v(rho, dA, dB));
    return std::max(1.0 + l1 / (dA - 1) - two_cmax, two_cmax - (1.0 + l1));
}

double prop_eq_l1max_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    // (a) pure bipartite state
    const Matrix pure = haar_state(rng, 4);
    const double ra =
        std::abs(std::exp2(cmax_iq_v(pure, 2, 2)) - (1.0 + cl1_iq_v(pure, 2, 2)));
    // (b) the rho(lambda) family
    const QuantumState rl = states::rho_lambda(rng.uniform());
    const double rb =
        std::abs(std::exp2(cmax_iq_v(rl.rho, 2, 2)) - (1.0 + cl1_iq_v(rl.rho, 2, 2)));
    // (c) two-block family on dA=4, dB=2: support on A-level pairs (0,3), (1,2)
    const int dB = 2;
    Matrix rho = Matrix::Zero(8, 8);
    const std::vector<double> w = states::sample_dirichlet(rng, 2);
    const int pairs[2][2] = {{0, 3}, {1, 2}};
    for (int p = 0; p < 2; ++p) {
        const Matrix blockm = states::sample_ginibre(rng, 2 * dB, 2 * dB);
        const int rows[4] = {pairs[p][0] * dB, pairs[p][0] * dB + 1,
                             pairs[p][1] * dB, pairs[p][1] * dB + 1};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) rho(rows[r], rows[c]) = w[p] * blockm(r, c);
    }
    const double rc =
        std::abs(std::exp2(cmax_iq_v(rho, 4, 2)) - (1.0 + cl1_iq_v(rho, 4, 2)));
    return std::max({ra, rb, rc});
}

double prop_subl1_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    const Matrix rho = states::sample_ginibre(rng, 4, 4);
    const Matrix rhoB = linalg::partial_trace(rho, 2, 2, 1);
    return cl1_iq_v(rho, 2, 2) + cl1(rhoB) - cl1(rho);
}

double prop_purity_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    const Matrix rho = states::sample_ginibre(rng, 4, 4);
    const Matrix rhoA = linalg::partial_trace(rho, 2, 2, 0);
    const double lhs = std::pow(cl1_iq_v(rho, 2, 2), 2) - std::pow(cl1(rhoA), 2);
    const double rhs = 2.0 * entanglement::purity_gap(rho, {2, 2});
    return rhs - lhs;
}

double mono_l1_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    const Matrix rho = states::sample_ginibre(rng, 8, 8);
    const std::vector<int> dims{2, 2, 2};
    const Matrix rho_bc = linalg::partial_trace(rho, dims, {1, 2});
    const Matrix rho_ac = linalg::partial_trace(rho, dims, {0, 2});
    const double ab_c = cl1_iq_v(rho, 4, 2);
    const double a_bc = cl1_iq_v(rho, 2, 4);
    const double b_c = cl1_iq_v(rho_bc, 2, 2);
    const double a_c = cl1_iq_v(rho_ac, 2, 2);
    return std::max(a_bc + b_c - ab_c, a_c + b_c - ab_c);
}

double mono_cf_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    const Vector psi = states::sample_haar_pure(rng, 8);  // 2 x 2 x 2
    const Matrix rho = psi * psi.adjoint();
    const std::vector<int> dims{2, 2, 2};
    const Matrix rho_ab = linalg::partial_trace(rho, dims, {0, 1});
    const Matrix rho_a = linalg::partial_trace(rho, dims, {0});
    const double lhs = diag_entropy(rho_ab);  // C_f^{AB|C} of a pure state

    // Decomposition of rho_BC induced by the A reference basis:
    // psi = sum_i sqrt(p_i) |i>_A |u_i>_BC. The average S(Delta_B Tr_C .) over
    // it upper-bounds C_f^{B|C}, which makes this the strengthened (safe)
    // right-hand side.
    double avg = 0.0;
    for (int i = 0; i < 2; ++i) {
        const Vector u = psi.segment(i * 4, 4);
        const double p = u.squaredNorm();
        if (p < 1e-14) continue;
        const Matrix ub = u * u.adjoint() / p;
        avg += p * linalg::entropy_of(
                       linalg::partial_trace(ub, 2, 2, 0).diagonal().real());
    }
    const double rhs = diag_entropy(rho_a) + avg;
    return rhs - lhs;
}

double eq3_violation_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    // Product construction rho_{A1 B} (x) rho_{A2 C} with coherent marginals:
    // psi(p) = sqrt(p)|a0>|0> + sqrt(1-p)|a1>|1> with a0/a1 the Hadamard basis.
    auto tilted = [](double p) {
        Vector a0(2), a1(2);
        a0 << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        a1 << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
        Vector out = Vector::Zero(4);
        for (int i = 0; i < 2; ++i) {
            out(i * 2 + 0) += std::sqrt(p) * a0(i);
            out(i * 2 + 1) += std::sqrt(1.0 - p) * a1(i);
        }
        return out;
    };
    const double p1 = 0.6 + 0.35 * rng.uniform();
    const double p2 = 0.6 + 0.35 * rng.uniform();
    const Vector v1 = tilted(p1);
    const Vector v2 = tilted(p2);
    Matrix rho = linalg::tensor(v1 * v1.adjoint(), v2 * v2.adjoint());
    // Order is (A1, B, A2, C); bring A1 and A2 together.
    rho = linalg::permute_subsystems(rho, {2, 2, 2, 2}, {0, 2, 1, 3});
    const std::vector<int> dims{2, 2, 2, 2};  // A1 A2 B C
    const Matrix rho_ab = linalg::partial_trace(rho, dims, {0, 1, 2});
    const Matrix rho_ac = linalg::partial_trace(rho, dims, {0, 1, 3});
    const double gain =
        cr_iq_v(rho_ab, 4, 2) + cr_iq_v(rho_ac, 4, 2) - cr_iq_v(rho, 4, 4);
    return 0.01 - gain;  // pass when the sum beats the joint by > 0.01 bits
}

Matrix joint_ab(const Matrix& a, const Matrix& b) {
    // (A1 B1) x (A2 B2) reordered to (A1 A2 | B1 B2).
    return linalg::permute_subsystems(linalg::tensor(a, b), {2, 2, 2, 2}, {0, 2, 1, 3});
}

double additivity_r_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    const Matrix a = states::sample_ginibre(rng, 4, 4);
    const Matrix b = states::sample_ginibre(rng, 4, 4);
    return std::abs(cr_iq_v(joint_ab(a, b), 4, 4) - cr_iq_v(a, 2, 2) - cr_iq_v(b, 2, 2));
}

double additivity_l1_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    const Matrix a = states::sample_ginibre(rng, 4, 4);
    const Matrix b = states::sample_ginibre(rng, 4, 4);
    return std::abs((1.0 + cl1_iq_v(joint_ab(a, b), 4, 4)) -
                    (1.0 + cl1_iq_v(a, 2, 2)) * (1.0 + cl1_iq_v(b, 2, 2)));
}

double additivity_max_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    const Matrix a = states::sample_ginibre(rng, 4, 4);
    const Matrix b = states::sample_ginibre(rng, 4, 4);
    return std::abs(cmax_iq_v(joint_ab(a, b), 4, 4) - cmax_iq_v(a, 2, 2) -
                    cmax_iq_v(b, 2, 2));
}

double additivity_f_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    const Matrix a = states::sample_ginibre(rng, 4, 2);
    const Matrix b = states::sample_ginibre(rng, 4, 2);
    const RoofWithOracle fa = checked_roof(a, f_iq(2, 2), false, ctx.roof_cfg);
    const RoofWithOracle fb = checked_roof(b, f_iq(2, 2), false, ctx.roof_cfg);
    const convexroof::RoofResult joint =
        convexroof::minimize_roof(joint_ab(a, b), f_iq(4, 4), ctx.roof_cfg);
    const double viol = std::abs(joint.value - fa.value - fb.value);
    return std::max(viol, std::max(fa.oracle_dev, fb.oracle_dev) - ctx.spec.tiers.roof);
}

double additivity_w_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    const Matrix a = states::sample_ginibre(rng, 2, 2);
    const Matrix b = states::sample_ginibre(rng, 2, 2);
    const double wj = coherence::c_w(linalg::tensor(a, b)).value;
    const double wa = coherence::c_w(a).value;
    const double wb = coherence::c_w(b).value;
    return std::abs((1.0 - wj) - (1.0 - wa) * (1.0 - wb));
}

double additivity_roc_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    const Matrix a = states::sample_ginibre(rng, 2, 2);
    const Matrix b = states::sample_ginibre(rng, 2, 2);
    const Matrix j = linalg::tensor(a, b);
    const double add =
        std::abs(coherence::c_max(j).value - coherence::c_max(a).value -
                 coherence::c_max(b).value);
    const double mult =
        std::abs((1.0 + coherence::roc(j).value) -
                 (1.0 + coherence::roc(a).value) * (1.0 + coherence::roc(b).value));
    return std::max(add, mult);
}

double strongmono_trial(const SuiteContext& ctx, bool use_l1) {
    Rng rng = ctx.rng();
    const Matrix rho = states::sample_ginibre(rng, 4, 4);
    const auto kraus = sample_incoherent_instrument(rng, 2, 3);
    const Matrix eyeB = Matrix::Identity(2, 2);
    auto measure = [&](const Matrix& m) {
        return use_l1 ? cl1_iq_v(m, 2, 2) : cr_iq_v(m, 2, 2);
    };
    double avg = 0.0;
    for (const Matrix& k : kraus) {
        const Matrix kk = linalg::tensor(k, eyeB);
        Matrix post = kk * rho * kk.adjoint();
        const double p = post.trace().real();
        if (p < 1e-12) continue;
        post /= p;
        post = 0.5 * (post + post.adjoint());
        avg += p * measure(post);
    }
    return avg - measure(rho);
}

double cptpB_mono_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    const Matrix rho = states::sample_ginibre(rng, 4, 4);
    const auto kraus = sample_cptp_kraus(rng, 2, 2 + static_cast<int>(rng.uniform(0.0, 3.0)));
    const Matrix eyeA = Matrix::Identity(2, 2);
    Matrix out = Matrix::Zero(4, 4);
    for (const Matrix& k : kraus) {
        const Matrix kk = linalg::tensor(eyeA, k);
        out += kk * rho * kk.adjoint();
    }
    out = 0.5 * (out + out.adjoint());
    return std::max({cr_iq_v(out, 2, 2) - cr_iq_v(rho, 2, 2),
                     cl1_iq_v(out, 2, 2) - cl1_iq_v(rho, 2, 2),
                     cmin_iq_v(out, 2, 2) - cmin_iq_v(rho, 2, 2)});
}

double appC_norm_trial(const SuiteContext& ctx) {
    Rng rng = ctx.rng();
    const int n = ctx.trial % 2 == 0 ? 3 : 4;
    Matrix p(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p(i, j) = rng.cgaussian();
    const double tn = linalg::trace_norm(p);
    double worst = -1e300;
    for (int k = 0; k < 50; ++k) {
        const Matrix u = states::random_unitary(rng, n);
        const Matrix v = states::random_unitary(rng, n);
        worst = std::max(worst, tn - linalg::l1_norm(u * p * v));
    }
    Eigen::JacobiSVD<Matrix> svd(p, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double attained =
        linalg::l1_norm(svd.matrixU().adjoint() * p * svd.matrixV());
    return std::max(worst, std::abs(attained - tn));
}

struct SuiteDef {
    int default_trials;
    double default_tol;
    double rank2_tol;  // used when ensemble == "rank2" (if >= 0)
    std::function<double(const SuiteContext&)> run;
};

const std::map<std::string, SuiteDef>& registry() {
    static const std::map<std::string, SuiteDef> reg = {
        {"thm1", {300, 1e-9, 5e-3, thm1_trial}},
        {"thm2", {300, 1e-9, 5e-3, thm2_trial}},
        {"lem1", {300, 1e-8, -1, lem1_trial}},
        {"lem2", {300, 1e-9, 5e-3, lem2_trial}},
        {"lem3", {300, 1e-9, 5e-3, lem3_trial}},
        {"prop1", {300, 1e-9, -1, prop1_trial}},
        {"prop-l1max", {500, 1e-6, -1, prop_l1max_trial}},
        {"prop-eq-l1max", {100, 1e-6, -1, prop_eq_l1max_trial}},
        {"prop-subl1", {500, 1e-8, -1, prop_subl1_trial}},
        {"prop-purity", {500, 1e-8, -1, prop_purity_trial}},
        {"mono-l1", {500, 1e-8, -1, mono_l1_trial}},
        {"mono-cf", {300, 1e-9, -1, mono_cf_trial}},
        {"eq3-violation", {20, 0.0, -1, eq3_violation_trial}},
        {"additivity-r", {50, 1e-9, -1, additivity_r_trial}},
        {"additivity-l1", {50, 1e-9, -1, additivity_l1_trial}},
        {"additivity-max", {50, 1e-6, -1, additivity_max_trial}},
        {"additivity-f", {20, 5e-3, -1, additivity_f_trial}},
        {"additivity-w", {50, 1e-6, -1, additivity_w_trial}},
        {"additivity-roc", {50, 1e-6, -1, additivity_roc_trial}},
        {"strongmono-r",
         {200, 1e-8, -1, [](const SuiteContext& c) { return strongmono_trial(c, false); }}},
        {"strongmono-l1",
         {200, 1e-8, -1, [](const SuiteContext& c) { return strongmono_trial(c, true); }}},
        {"cptpB-mono", {200, 1e-8, -1, cptpB_mono_trial}},
        {"appC-norm", {300, 1e-9, -1, appC_norm_trial}},
    };
    return reg;
}

} // namespace

double qubit_cf(const Matrix& rho) {
    if (rho.rows() != 2)
        throw DimensionMismatchError("qubit_cf is defined for qubits only");
    const double c2 = 4.0 * std::norm(rho(0, 1));
    const double t = std::sqrt(std::max(0.0, 1.0 - c2));
    return binary_entropy((1.0 + t) / 2.0);
}

std::vector<std::pair<double, Vector>> qubit_cf_optimal_decomposition(const Matrix& rho) {
    if (rho.rows() != 2)
        throw DimensionMismatchError("qubit decomposition needs a qubit");
    const double x = 2.0 * rho(0, 1).real();
    const double y = -2.0 * rho(0, 1).imag();
    const double z = (rho(0, 0) - rho(1, 1)).real();
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x - y * y));
    if (s < 1e-12) {
        // Maximal coherence for the given diagonal: the state is pure.
        const linalg::Spectrum es = linalg::eigh(rho);
        return {{1.0, es.eigenvectors.col(0)}};
    }
    // Both members sit on the circle of constant off-diagonal magnitude, so
    // each attains S(Delta .) = h((1+s)/2) and the average is the closed form.
    const double wp = (1.0 + z / s) / 2.0;
    std::vector<std::pair<double, Vector>> out;
    if (wp > 1e-14) out.emplace_back(wp, bloch_state(x, y, s));
    if (1.0 - wp > 1e-14) out.emplace_back(1.0 - wp, bloch_state(x, y, -s));
    return out;
}

std::vector<Matrix> sample_incoherent_instrument(Rng& rng, int dA, int n_kraus) {
    if (n_kraus < 1 || dA < 1) throw RangeError("instrument: bad sizes");
    std::vector<Matrix> kraus(n_kraus, Matrix::Zero(dA, dA));
    std::vector<std::vector<int>> perms(n_kraus);
    for (int m = 0; m < n_kraus; ++m) {
        // Random permutation so that K^dag K stays diagonal.
        std::vector<int> perm(dA);
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = dA - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.uniform(0.0, i + 1));
            std::swap(perm[i], perm[j]);
        }
        perms[m] = perm;
        for (int r = 0; r < dA; ++r) kraus[m](perm[r], r) = rng.cgaussian();
    }
    for (int r = 0; r < dA; ++r) {
        double s2 = 0.0;
        for (int m = 0; m < n_kraus; ++m) s2 += std::norm(kraus[m](perms[m][r], r));
        const double s = std::sqrt(s2);
        if (s < 1e-12) throw RangeError("instrument: degenerate column draw");
        for (int m = 0; m < n_kraus; ++m) kraus[m](perms[m][r], r) /= s;
    }
    return kraus;
}

std::vector<Matrix> sample_cptp_kraus(Rng& rng, int dim, int n_kraus) {
    if (n_kraus < 1 || dim < 1) throw RangeError("cptp: bad sizes");
    Matrix g(dim * n_kraus, dim);
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.cgaussian();
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix q = qr.householderQ() * Matrix::Identity(dim * n_kraus, dim);
    std::vector<Matrix> kraus(n_kraus);
    for (int m = 0; m < n_kraus; ++m) kraus[m] = q.block(m * dim, 0, dim, dim);
    return kraus;
}

std::vector<std::string> list_suites() {
    std::vector<std::string> names;
    for (const auto& [name, def] : registry()) names.push_back(name);
    return names;
}

SuiteReport run_suite(const SuiteSpec& spec) {
    const auto it = registry().find(spec.suite);
    if (it == registry().end()) throw ConfigError("unknown suite: " + spec.suite);
    const SuiteDef& def = it->second;
    if (spec.trials < 1) throw ConfigError("trials must be >= 1");

    SuiteReport report;
    report.suite = spec.suite;
    report.seed = spec.seed;
    report.trials = spec.trials;
    double tol = spec.tol;
    if (tol < 0.0) {
        tol = def.default_tol;
        if (spec.ensemble == "rank2" && def.rank2_tol >= 0.0) tol = def.rank2_tol;
    }
    report.tolerance = tol;
    report.records.resize(spec.trials);

    convexroof::RoofConfig roof_cfg;
    if (spec.roof_restarts > 0) roof_cfg.restarts = spec.roof_restarts;

    const auto t0 = std::chrono::steady_clock::now();
    std::atomic<bool> solver_failure{false};
    auto run_range = [&](int begin, int end) {
        for (int t = begin; t < end; ++t) {
            TrialRecord& rec = report.records[t];
            rec.index = t;
            rec.seed = static_cast<std::uint64_t>(t);
            try {
                SuiteContext ctx{spec, t, roof_cfg};
                rec.margin = def.run(ctx);
                rec.pass = rec.margin <= tol;
            } catch (const MaxIterationsError&) {
                rec.margin = std::numeric_limits<double>::infinity();
                rec.pass = false;
                solver_failure = true;
            }
        }
    };

    const int threads = std::max(1, spec.threads);
    if (threads == 1) {
        run_range(0, spec.trials);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (spec.trials + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const int begin = w * chunk;
            const int end = std::min(spec.trials, begin + chunk);
            if (begin < end) pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    report.passes = static_cast<int>(std::count_if(
        report.records.begin(), report.records.end(),
        [](const TrialRecord& r) { return r.pass; }));
    report.max_margin = -std::numeric_limits<double>::infinity();
    for (const TrialRecord& r : report.records)
        report.max_margin = std::max(report.max_margin, r.margin);
    report.solver_failure = solver_failure;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string report_to_json(const SuiteReport& r) {
    nlohmann::json j;
    j["schema_version"] = r.schema_version;
    j["suite"] = r.suite;
    j["seed"] = r.seed;
    j["trials"] = r.trials;
    j["passes"] = r.passes;
    j["tolerance"] = r.tolerance;
    j["max_margin"] = r.max_margin;
    j["solver_failure"] = r.solver_failure;
    j["wall_seconds"] = r.wall_seconds;
    nlohmann::json recs = nlohmann::json::array();
    for (const TrialRecord& rec : r.records)
        recs.push_back({{"trial", rec.index},
                        {"seed", rec.seed},
                        {"margin", rec.margin},
                        {"pass", rec.pass}});
    j["records"] = recs;
    return j.dump(2);
}

std::string report_to_csv(const SuiteReport& r) {
    std::string out = "trial,seed,margin,pass\n";
    for (const TrialRecord& rec : r.records) {
        out += std::to_string(rec.index);
        out += ',';
        out += std::to_string(rec.seed);
        out += ',';
        out += format_value(rec.margin);
        out += ',';
        out += rec.pass ? '1' : '0';
        out += '\n';
    }
    return out;
}

void write_report(const SuiteReport& r, const std::string& path,
                  const std::string& format) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open report path " + path);
    out << (format == "csv" ? report_to_csv(r) : report_to_json(r));
    if (!out) throw IoError("report write failed for " + path);
}

} // namespace iqcoh::harness
