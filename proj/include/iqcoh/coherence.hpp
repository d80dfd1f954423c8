#ifndef IQCOH_COHERENCE_HPP
#define IQCOH_COHERENCE_HPP

#include <string>

#include "iqcoh/convexroof.hpp"
#include "iqcoh/sdp.hpp"
#include "iqcoh/states.hpp"

namespace iqcoh::coherence {

enum class Method { ClosedForm, Sdp, RoofSearch, FormulaPure };
enum class BoundDirection { Exact, Upper, Lower };

struct MeasureMeta {
    int sdp_iterations = 0;
    double sdp_gap = 0.0;
    int restarts_agreeing = 0;
    int roof_terms = 0;
};

struct MeasureReport {
    std::string measure;
    double value = 0.0;
    Method method = Method::ClosedForm;
    BoundDirection bound = BoundDirection::Exact;
    MeasureMeta meta;
};

/// A is the coherent side; the reference basis on A is the computational one.
struct Bipartition {
    int dA = 0;
    int dB = 0;
};

// Single-system measures (values in bits except c_l1 / c_w / roc).
MeasureReport c_l1(const Matrix& rho);
MeasureReport c_r(const Matrix& rho);
MeasureReport c_max(const Matrix& rho, const sdp::SdpOptions& opts = {});
MeasureReport c_f(const Matrix& rho, const convexroof::RoofConfig& cfg = {});
MeasureReport c_a(const Matrix& rho, const convexroof::RoofConfig& cfg = {});
MeasureReport c_a_reg(const Matrix& rho);
MeasureReport c_w(const Matrix& rho, const sdp::SdpOptions& opts = {});

/// Robustness of coherence, computed through the dual cover SDP; an
/// independent route satisfying c_max = log2(1 + roc).
MeasureReport roc(const Matrix& rho, const sdp::SdpOptions& opts = {});

// Bipartite incoherent-quantum measures.
MeasureReport cr_iq(const Matrix& rho, const Bipartition& bp);
MeasureReport cmax_iq(const Matrix& rho, const Bipartition& bp,
                      const sdp::SdpOptions& opts = {});
MeasureReport cmin_iq(const Matrix& rho, const Bipartition& bp);
MeasureReport cl1_iq(const Matrix& rho, const Bipartition& bp);
MeasureReport cf_iq(const Matrix& rho, const Bipartition& bp,
                    const convexroof::RoofConfig& cfg = {});
MeasureReport ca_iq(const Matrix& rho, const Bipartition& bp,
                    const convexroof::RoofConfig& cfg = {});

/// min over local unitary basis changes on A of cl1_iq; multi-start search
/// seeded from the identity and the eigenbasis of rho_A.
MeasureReport q_l1(const Matrix& rho, const Bipartition& bp,
                   const convexroof::RoofConfig& cfg = {});

/// Dispatch by measure name as used by the CLI; bipartite names require bp.
/// Throws UnknownMeasureError.
MeasureReport evaluate(const std::string& name, const Matrix& rho,
                       const Bipartition* bp,
                       const convexroof::RoofConfig& roof_cfg = {},
                       const sdp::SdpOptions& sdp_opts = {});

} // namespace iqcoh::coherence

#endif
