#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "iqcoh/harness.hpp"

using namespace iqcoh;

TEST_CASE("incoherent instruments are exactly trace preserving and incoherent") {
    Rng rng(1);
    for (int t = 0; t < 5; ++t) {
        const auto kraus = harness::sample_incoherent_instrument(rng, 3, 4);
        Matrix sum = Matrix::Zero(3, 3);
        for (const Matrix& k : kraus) {
            sum += k.adjoint() * k;
            // at most one nonzero per column keeps incoherent states incoherent
            for (int c = 0; c < 3; ++c) {
                int nonzero = 0;
                for (int r = 0; r < 3; ++r)
                    if (std::abs(k(r, c)) > 0.0) ++nonzero;
                CHECK(nonzero <= 1);
            }
        }
        CHECK((sum - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
        // action check: diagonal in, diagonal out (summed over outcomes)
        const Matrix inc = states::sample_random_incoherent(rng, 3);
        Matrix out = Matrix::Zero(3, 3);
        for (const Matrix& k : kraus) out += k * inc * k.adjoint();
        CHECK((out - Matrix(out.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <
              1e-14);
    }
}

TEST_CASE("cptp kraus sets close to the identity") {
    Rng rng(2);
    const auto kraus = harness::sample_cptp_kraus(rng, 3, 4);
    Matrix sum = Matrix::Zero(3, 3);
    for (const Matrix& k : kraus) sum += k.adjoint() * k;
    CHECK((sum - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("qubit coherence of formation closed form vs grid oracle") {
    Rng rng(3);
    auto f = [](const Vector& psi) { return linalg::entropy_of(psi.cwiseAbs2()); };
    for (int t = 0; t < 5; ++t) {
        const Matrix rho = states::sample_ginibre(rng, 2, 2);
        const double closed = harness::qubit_cf(rho);
        const double oracle = convexroof::grid_oracle_rank2(
            rho, f, 0.01, convexroof::RoofSense::Minimize);
        CHECK(std::abs(closed - oracle) < 2e-3);
    }
    CHECK_THROWS_AS((void)harness::qubit_cf(Matrix::Identity(3, 3) / 3.0),
                    DimensionMismatchError);
}

TEST_CASE("qubit optimal decomposition attains the closed form exactly") {
    Rng rng(4);
    auto dephased_entropy = [](const Vector& psi) {
        return linalg::entropy_of(psi.cwiseAbs2());
    };
    for (int t = 0; t < 8; ++t) {
        const Matrix rho = states::sample_ginibre(rng, 2, 2);
        const auto decomp = harness::qubit_cf_optimal_decomposition(rho);
        Matrix recon = Matrix::Zero(2, 2);
        double avg = 0.0;
        for (const auto& [w, psi] : decomp) {
            recon += w * psi * psi.adjoint();
            avg += w * dephased_entropy(psi);
        }
        CHECK((recon - rho).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(avg - harness::qubit_cf(rho)) < 1e-9);
    }
}

TEST_CASE("suite catalog is sorted and run_suite validates input") {
    const auto names = harness::list_suites();
    CHECK(names.size() == 23);
    CHECK(std::is_sorted(names.begin(), names.end()));
    harness::SuiteSpec bad;
    bad.suite = "no-such-suite";
    CHECK_THROWS_AS((void)harness::run_suite(bad), ConfigError);
    bad.suite = "prop1";
    bad.trials = 0;
    CHECK_THROWS_AS((void)harness::run_suite(bad), ConfigError);
}

TEST_CASE("reports are deterministic and thread-count independent") {
    harness::SuiteSpec spec;
    spec.suite = "mono-l1";
    spec.trials = 8;
    spec.seed = 7;
    const harness::SuiteReport r1 = harness::run_suite(spec);
    spec.threads = 3;
    const harness::SuiteReport r2 = harness::run_suite(spec);
    CHECK(harness::report_to_csv(r1) == harness::report_to_csv(r2));
    CHECK(r1.passes == spec.trials);
    CHECK(r1.all_pass());
}

TEST_CASE("csv report format: header plus one fixed-format row per trial") {
    harness::SuiteSpec spec;
    spec.suite = "prop1";
    spec.trials = 3;
    const harness::SuiteReport rep = harness::run_suite(spec);
    const std::string csv = harness::report_to_csv(rep);
    CHECK(csv.rfind("trial,seed,margin,pass\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("json report carries the schema and tallies") {
    harness::SuiteSpec spec;
    spec.suite = "appC-norm";
    spec.trials = 4;
    const harness::SuiteReport rep = harness::run_suite(spec);
    const std::string j = harness::report_to_json(rep);
    CHECK(j.find("\"schema_version\": 1") != std::string::npos);
    CHECK(j.find("\"suite\": \"appC-norm\"") != std::string::npos);
    CHECK(rep.trials == 4);
    CHECK(rep.passes + 0 == 4);
    CHECK(rep.max_margin <= rep.tolerance);
}

TEST_CASE("format_value renders 12 significant digits") {
    CHECK(harness::format_value(1.0) == "1");
    CHECK(harness::format_value(0.1234567890123456) == "0.123456789012");
    CHECK(harness::format_value(-2.5e-9) == "-2.5e-09");
}

TEST_CASE("representative suites pass on small runs") {
    for (const char* name : {"thm1", "lem1", "prop-subl1", "strongmono-l1",
                             "cptpB-mono", "eq3-violation"}) {
        harness::SuiteSpec spec;
        spec.suite = name;
        spec.trials = 5;
        const harness::SuiteReport rep = harness::run_suite(spec);
        INFO("suite ", name, " max margin ", rep.max_margin);
        CHECK(rep.all_pass());
    }
}

TEST_CASE("per-trial seeds allow standalone reproduction") {
    harness::SuiteSpec spec;
    spec.suite = "prop-purity";
    spec.trials = 6;
    spec.seed = 123;
    const harness::SuiteReport rep = harness::run_suite(spec);
    // re-run a single trial by shrinking the suite; trial i depends only on
    // (seed, i), so the prefix run reproduces the same records
    spec.trials = 3;
    const harness::SuiteReport prefix = harness::run_suite(spec);
    for (int i = 0; i < 3; ++i)
        CHECK(prefix.records[i].margin == rep.records[i].margin);
}
