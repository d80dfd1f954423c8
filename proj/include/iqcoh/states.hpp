#ifndef IQCOH_STATES_HPP
#define IQCOH_STATES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "iqcoh/linalg.hpp"
#include "iqcoh/rng.hpp"

namespace iqcoh {

/// Density matrix plus its subsystem dimension signature. The incoherent
/// reference basis of every subsystem is the computational basis.
struct QuantumState {
    Matrix rho;
    std::vector<int> dims;

    int dim() const { return static_cast<int>(rho.rows()); }
};

enum class EnsembleKind { HaarPure, GinibreMixed, RandomIq, RandomIncoherent };

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::GinibreMixed;
    std::vector<int> dims;
    int count = 1;
    int rank = 0; // 0 = full rank for GinibreMixed
    std::uint64_t seed = 1;
};

namespace states {

/// Verify the QuantumState invariants; throws NotAStateError or
/// DimensionMismatchError.
QuantumState validate(Matrix rho, std::vector<int> dims);

QuantumState from_vector(const Vector& psi, std::vector<int> dims);

/// (|00> - |11>)/sqrt(2) on 2 (x) 2.
QuantumState bell_phi_plus();

/// (|01> - |10>)/sqrt(2) on 2 (x) 2.
QuantumState psi_plus();

/// lambda |phi+><phi+| + (1-lambda) |psi+><psi+|.
QuantumState rho_lambda(double lambda);

/// Pure bipartite state sum_i sqrt(p_i) |i>_A |u_i>_B. The local states need
/// not be orthogonal but must be normalized.
QuantumState schmidt_pure(const std::vector<double>& probs,
                          const std::vector<Vector>& local_states);

// Samplers. All are deterministic functions of the generator state.
Vector sample_haar_pure(Rng& rng, int dim);
Matrix sample_ginibre(Rng& rng, int dim, int rank);
Matrix sample_random_iq(Rng& rng, int dA, int dB);
Matrix sample_random_incoherent(Rng& rng, int dim);
Matrix random_unitary(Rng& rng, int dim);
std::vector<double> sample_dirichlet(Rng& rng, int n);

/// Materialize an ensemble; element i is drawn from Rng::stream(spec.seed, i).
std::vector<QuantumState> sample(const EnsembleSpec& spec);

void save(const QuantumState& state, const std::string& path);
QuantumState load(const std::string& path);

std::string to_json(const QuantumState& state);
QuantumState from_json(const std::string& text);

} // namespace states
} // namespace iqcoh

#endif
