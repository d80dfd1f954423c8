#ifndef IQCOH_ENTANGLEMENT_HPP
#define IQCOH_ENTANGLEMENT_HPP

#include "iqcoh/coherence.hpp"

namespace iqcoh::entanglement {

using coherence::Bipartition;
using coherence::BoundDirection;
using coherence::MeasureReport;
using coherence::Method;

/// Entanglement of formation: convex-roof minimum of S(Tr_A psi).
MeasureReport e_f(const Matrix& rho, const Bipartition& bp,
                  const convexroof::RoofConfig& cfg = {});

/// Entanglement of assistance: convex-roof maximum of the same functional.
MeasureReport e_a(const Matrix& rho, const Bipartition& bp,
                  const convexroof::RoofConfig& cfg = {});

/// S(X|Y) = S(rho_XY) - S(rho_Y) in bits; x and y are disjoint index sets
/// into dims.
double conditional_entropy(const Matrix& rho, const std::vector<int>& dims,
                           const std::vector<int>& x, const std::vector<int>& y);

/// Tr rho_AB^2 - Tr rho_A^2; positive only on entangled states.
double purity_gap(const Matrix& rho, const Bipartition& bp);

} // namespace iqcoh::entanglement

#endif
