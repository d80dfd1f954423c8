#include "iqcoh/entanglement.hpp"

#include <algorithm>
#include <cmath>

namespace iqcoh::entanglement {

namespace {

void require_bipartition(const Matrix& rho, const Bipartition& bp) {
    if (bp.dA < 1 || bp.dB < 1 || bp.dA * bp.dB != rho.rows())
        throw DimensionMismatchError("bipartition does not match state dimension");
}

/// S(Tr_A |psi><psi|): eigenvalues of M M^dag where M is psi reshaped to
/// dA x dB (entanglement spectrum of the cut).
convexroof::ObjectiveFn reduction_entropy(int dA, int dB) {
    return [dA, dB](const Vector& psi) {
        Matrix m(dA, dB);
        for (int i = 0; i < dA; ++i) m.row(i) = psi.segment(i * dB, dB).transpose();
        const RealVector sv = linalg::svd_values(m);
        return linalg::entropy_of(sv.cwiseAbs2());
    };
}

} // namespace

MeasureReport e_f(const Matrix& rho, const Bipartition& bp,
                  const convexroof::RoofConfig& cfg) {
    linalg::check_state(rho);
    require_bipartition(rho, bp);
    const convexroof::RoofResult r =
        convexroof::minimize_roof(rho, reduction_entropy(bp.dA, bp.dB), cfg);
    MeasureReport rep{"e_f", std::max(r.value, 0.0), Method::RoofSearch,
                      BoundDirection::Upper, {}};
    rep.meta.restarts_agreeing = r.restarts_agreeing;
    rep.meta.roof_terms = static_cast<int>(r.best.weights.size());
    return rep;
}

MeasureReport e_a(const Matrix& rho, const Bipartition& bp,
                  const convexroof::RoofConfig& cfg) {
    linalg::check_state(rho);
    require_bipartition(rho, bp);
    const convexroof::RoofResult r =
        convexroof::maximize_roof(rho, reduction_entropy(bp.dA, bp.dB), cfg);
    MeasureReport rep{"e_a", std::max(r.value, 0.0), Method::RoofSearch,
                      BoundDirection::Lower, {}};
    rep.meta.restarts_agreeing = r.restarts_agreeing;
    rep.meta.roof_terms = static_cast<int>(r.best.weights.size());
    return rep;
}

double conditional_entropy(const Matrix& rho, const std::vector<int>& dims,
                           const std::vector<int>& x, const std::vector<int>& y) {
    for (int i : x)
        if (std::find(y.begin(), y.end(), i) != y.end())
            throw DimensionMismatchError("conditional_entropy: subsystem sets overlap");
    std::vector<int> xy;
    xy.reserve(x.size() + y.size());
    xy.insert(xy.end(), x.begin(), x.end());
    xy.insert(xy.end(), y.begin(), y.end());
    std::sort(xy.begin(), xy.end());
    std::vector<int> ys = y;
    std::sort(ys.begin(), ys.end());
    const Matrix rho_xy = linalg::partial_trace(rho, dims, xy);
    const Matrix rho_y = linalg::partial_trace(rho, dims, ys);
    return linalg::von_neumann_entropy(rho_xy) - linalg::von_neumann_entropy(rho_y);
}

double purity_gap(const Matrix& rho, const Bipartition& bp) {
    linalg::check_state(rho);
    require_bipartition(rho, bp);
    const Matrix rho_a = linalg::partial_trace(rho, bp.dA, bp.dB, 0);
    return (rho * rho).trace().real() - (rho_a * rho_a).trace().real();
}

} // namespace iqcoh::entanglement
