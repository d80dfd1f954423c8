#ifndef IQCOH_HARNESS_HPP
#define IQCOH_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "iqcoh/coherence.hpp"
#include "iqcoh/entanglement.hpp"

namespace iqcoh::harness {

struct Tolerances {
    double closed_form = 1e-8;
    double roof = 2e-3;            // roof vs oracle
    double roof_inequality = 5e-3; // inequality with a roof term on one side
};

struct SuiteSpec {
    std::string suite;
    int trials = 100;
    std::vector<int> dims;      // empty = suite default
    std::uint64_t seed = 42;
    double tol = -1.0;          // < 0 = suite default
    Tolerances tiers;
    std::string ensemble;       // "", "haar-pure", "ginibre", "rank2"
    int roof_restarts = 0;      // 0 = library default
    int threads = 1;
    std::string out;            // optional report path
    std::string format = "json";
};

struct TrialRecord {
    int index = 0;
    std::uint64_t seed = 0;     // stream id; trial reproducible standalone
    double margin = 0.0;        // violation amount (suite-specific semantics)
    bool pass = false;
};

struct SuiteReport {
    std::string suite;
    int schema_version = 1;
    int trials = 0;
    int passes = 0;
    double max_margin = 0.0;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    bool solver_failure = false;
    std::vector<TrialRecord> records;

    bool all_pass() const { return passes == trials && !solver_failure; }
};

/// Names in the registered catalog, sorted.
std::vector<std::string> list_suites();

/// Run one registered suite. Throws ConfigError for unknown names or invalid
/// specs; solver non-convergence inside a trial sets solver_failure instead
/// of throwing, so remaining trials still report.
SuiteReport run_suite(const SuiteSpec& spec);

std::string report_to_json(const SuiteReport& r);
std::string report_to_csv(const SuiteReport& r);
void write_report(const SuiteReport& r, const std::string& path,
                  const std::string& format);

/// Format a double with 12 significant digits, the fixed report format.
std::string format_value(double v);

// Samplers shared by monotonicity suites and tests.

/// Incoherent Kraus set on a dA-dimensional system: each operator has at most
/// one nonzero entry per column, so incoherent states map to incoherent
/// states; the set is completed to sum K^dag K = I exactly.
std::vector<Matrix> sample_incoherent_instrument(Rng& rng, int dA, int n_kraus);

/// CPTP channel Kraus operators via an isometry from a Ginibre QR.
std::vector<Matrix> sample_cptp_kraus(Rng& rng, int dim, int n_kraus);

// Closed forms used by the theorem suites on qubits (known literature
// results; the 2x2 concurrence cross-check lives in the tests only).
double qubit_cf(const Matrix& rho);                   // h((1+sqrt(1-4|rho01|^2))/2)
std::vector<std::pair<double, Vector>> qubit_cf_optimal_decomposition(const Matrix& rho);

} // namespace iqcoh::harness

#endif
