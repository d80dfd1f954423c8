#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "iqcoh/linalg.hpp"
#include "iqcoh/rng.hpp"
#include "iqcoh/states.hpp"

using namespace iqcoh;

namespace {

Matrix random_state(Rng& rng, int dim, int rank = 0) {
    return states::sample_ginibre(rng, dim, rank == 0 ? dim : rank);
}

// Independent D_max oracle: bisect on the smallest t with t*sigma - rho >= 0.
double d_max_bisect(const Matrix& rho, const Matrix& sigma) {
    auto feasible = [&](double t) {
        const linalg::Spectrum es = linalg::eigh(t * sigma - rho);
        return es.eigenvalues.minCoeff() >= -1e-12;
    };
    double lo = 0.0, hi = 1.0;
    while (!feasible(hi)) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return std::log2(hi);
}

} // namespace

TEST_CASE("tensor and partial trace are mutually consistent") {
    Rng rng(11);
    const Matrix a = random_state(rng, 2);
    const Matrix b = random_state(rng, 3);
    const Matrix ab = linalg::tensor(a, b);
    CHECK((linalg::partial_trace(ab, 2, 3, 0) - a).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((linalg::partial_trace(ab, 2, 3, 1) - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("multi-subsystem partial trace keeps requested order") {
    Rng rng(12);
    const Matrix a = random_state(rng, 2);
    const Matrix b = random_state(rng, 2);
    const Matrix c = random_state(rng, 3);
    const Matrix abc = linalg::tensor(linalg::tensor(a, b), c);
    const Matrix ac = linalg::partial_trace(abc, {2, 2, 3}, {0, 2});
    CHECK((ac - linalg::tensor(a, c)).cwiseAbs().maxCoeff() < 1e-12);
    const Matrix just_b = linalg::partial_trace(abc, {2, 2, 3}, {1});
    CHECK((just_b - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dephase is idempotent, trace preserving and block-selective") {
    Rng rng(13);
    const Matrix rho = random_state(rng, 6);
    const Matrix d1 = linalg::dephase(rho, {2, 3}, {0});
    CHECK(std::abs(d1.trace().real() - 1.0) < 1e-12);
    CHECK((linalg::dephase(d1, {2, 3}, {0}) - d1).cwiseAbs().maxCoeff() < 1e-14);
    // off-diagonal A-blocks vanish, diagonal blocks survive untouched
    CHECK(linalg::block(d1, 2, 3, 0, 1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((linalg::block(d1, 2, 3, 1, 1) - linalg::block(rho, 2, 3, 1, 1))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
    // dephasing every subsystem leaves only the diagonal
    const Matrix dd = linalg::dephase(rho, {2, 3}, {0, 1});
    CHECK((dd - Matrix(dd.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("permute_subsystems inverts and matches a direct swap") {
    Rng rng(14);
    const Matrix a = random_state(rng, 2);
    const Matrix b = random_state(rng, 3);
    const Matrix ab = linalg::tensor(a, b);
    const Matrix ba = linalg::permute_subsystems(ab, {2, 3}, {1, 0});
    CHECK((ba - linalg::tensor(b, a)).cwiseAbs().maxCoeff() < 1e-12);
    const Matrix back = linalg::permute_subsystems(ba, {3, 2}, {1, 0});
    CHECK((back - ab).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("block extraction reassembles the original operator") {
    Rng rng(15);
    const Matrix rho = random_state(rng, 6);
    Matrix rebuilt(6, 6);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            rebuilt.block(i * 3, j * 3, 3, 3) = linalg::block(rho, 2, 3, i, j);
    CHECK((rebuilt - rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("entropies hit the standard values") {
    CHECK(linalg::von_neumann_entropy(Matrix::Identity(2, 2) * 0.5) == doctest::Approx(1.0));
    Matrix pure = Matrix::Zero(3, 3);
    pure(0, 0) = 1.0;
    CHECK(linalg::von_neumann_entropy(pure) == doctest::Approx(0.0));
    RealVector p(4);
    p << 0.25, 0.25, 0.25, 0.25;
    CHECK(linalg::entropy_of(p) == doctest::Approx(2.0));
}

TEST_CASE("eigh is deterministic and ordered") {
    Rng rng(16);
    const Matrix rho = random_state(rng, 4);
    const linalg::Spectrum s1 = linalg::eigh(rho);
    const linalg::Spectrum s2 = linalg::eigh(rho);
    CHECK((s1.eigenvectors - s2.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 1; i < 4; ++i) CHECK(s1.eigenvalues(i - 1) >= s1.eigenvalues(i));
    const Matrix recon = s1.eigenvectors *
                         s1.eigenvalues.cast<Cx>().asDiagonal() *
                         s1.eigenvectors.adjoint();
    CHECK((recon - rho).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("d_max agrees with the PSD bisection oracle") {
    Rng rng(17);
    for (int t = 0; t < 10; ++t) {
        const Matrix rho = random_state(rng, 3);
        const Matrix sigma = random_state(rng, 3);
        const double lib = linalg::d_max(rho, sigma);
        CHECK(std::abs(lib - d_max_bisect(rho, sigma)) < 1e-8);
    }
}

TEST_CASE("d_max rejects support violations") {
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    Matrix sigma = Matrix::Zero(2, 2);
    sigma(1, 1) = 1.0;
    CHECK_THROWS_AS((void)linalg::d_max(rho, sigma), SupportViolationError);
}

TEST_CASE("d_min matches the overlap definition") {
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    CHECK(linalg::d_min(rho, Matrix::Identity(2, 2) * 0.5) == doctest::Approx(1.0));
    Rng rng(18);
    const Matrix r = random_state(rng, 3, 2);
    const Matrix s = random_state(rng, 3);
    const double direct =
        -std::log2((linalg::support_projector(r) * s).trace().real());
    CHECK(linalg::d_min(r, s) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("trace norm and l1 norm") {
    Rng rng(19);
    Matrix m(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = rng.cgaussian();
    CHECK(linalg::trace_norm(m) == doctest::Approx(linalg::svd_values(m).sum()));
    CHECK(linalg::l1_norm(m) == doctest::Approx(m.cwiseAbs().sum()));
    // unitary invariance of the trace norm
    const Matrix u = states::random_unitary(rng, 3);
    CHECK(linalg::trace_norm(u * m) == doctest::Approx(linalg::trace_norm(m)));
}

TEST_CASE("purify round-trips through the partial trace") {
    Rng rng(20);
    const Matrix rho = random_state(rng, 3);
    const Vector psi = linalg::purify(rho);
    const Matrix big = psi * psi.adjoint();
    CHECK((linalg::partial_trace(big, 3, 3, 0) - rho).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("support projector and rank") {
    Rng rng(21);
    const Matrix rho = random_state(rng, 4, 2);
    CHECK(linalg::rank_of(rho) == 2);
    const Matrix pi = linalg::support_projector(rho);
    CHECK((pi * pi - pi).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((pi * rho - rho).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("check_state rejects malformed matrices") {
    Matrix m = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(linalg::check_state(m), NotAStateError); // trace 2
    m *= 0.5;
    CHECK_NOTHROW(linalg::check_state(m));
    m(0, 1) = Cx(0.2, 0.0); // not Hermitian
    CHECK_THROWS_AS(linalg::check_state(m), NotAStateError);
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(linalg::check_state(neg), NotAStateError);
}

TEST_CASE("d_max and d_min bracket the relative entropy ordering on states") {
    Rng rng(22);
    const Matrix rho = random_state(rng, 3);
    const Matrix sigma = random_state(rng, 3);
    CHECK(linalg::d_min(rho, sigma) <= linalg::d_max(rho, sigma) + 1e-10);
}
