#ifndef IQCOH_CONVEXROOF_HPP
#define IQCOH_CONVEXROOF_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "iqcoh/linalg.hpp"

namespace iqcoh::convexroof {

/// Scalar functional evaluated on normalized pure states.
using ObjectiveFn = std::function<double(const Vector&)>;

enum class RoofSense { Minimize, Maximize };

/// Weighted pure-state decomposition of a density matrix.
struct Decomposition {
    std::vector<double> weights;
    std::vector<Vector> states;

    Matrix reconstruct(int dim) const;
    double average(const ObjectiveFn& f) const;
};

struct RoofConfig {
    int terms = 0;              // 0 means r^2 where r = rank(rho)
    int restarts = 32;
    int max_steps = 4000;       // Givens proposals per restart
    double step_tolerance = 1e-7;
    std::uint64_t seed = 2024;
};

struct RoofResult {
    double value = 0.0;
    RoofSense bound_direction = RoofSense::Minimize; // Minimize: upper bound of min
    Decomposition best;
    int restarts_agreeing = 0;  // restarts ending within 1e-6 of the best value
};

/// Decomposition |psi~_k> = sum_j V_kj sqrt(lambda_j) |e_j> from an m x r
/// matrix V with orthonormal columns; every decomposition of rho arises this
/// way. Throws NotIsometryError.
Decomposition enumerate_decomposition(const Matrix& rho, const Matrix& isometry);

/// Multi-start Givens search. The returned value is a certified upper bound
/// of the roof minimum (the decomposition in `best` attains it).
RoofResult minimize_roof(const Matrix& rho, const ObjectiveFn& f,
                         const RoofConfig& cfg = {});

/// Mirror image; certified lower bound of the roof maximum.
RoofResult maximize_roof(const Matrix& rho, const ObjectiveFn& f,
                         const RoofConfig& cfg = {});

/// Exhaustive scan over the 2-term mixings of a rank <= 2 state at the given
/// angular resolution (radians). Independent of the optimizer machinery.
/// Throws RankTooHighError for rank > 2.
double grid_oracle_rank2(const Matrix& rho, const ObjectiveFn& f,
                         double resolution, RoofSense sense);

/// Both extrema from a single scan.
struct GridExtrema {
    double min_value;
    double max_value;
};
GridExtrema grid_extrema_rank2(const Matrix& rho, const ObjectiveFn& f,
                               double resolution);

} // namespace iqcoh::convexroof

#endif
