// Finite-difference verification of the Poisson-bracket claims, with the
// bracket taken verbatim as
//   {f,g} = m sum_j (df/dlam_j dg/dphi_j - df/dphi_j dg/dlam_j)
//         + sum_{j,i,a} (df/dW_i[a,j] dg/dV_i[j,a] - df/dV_i[j,a] dg/dW_i[a,j])
// with all framing coordinates treated as formally independent, evaluated at
// states on the constraint surface.
#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ccm/coords.hpp"

namespace ccm {

struct PhaseState {
    SpectralPoint point;
    std::optional<SpinFraming> framing;
};

struct PhaseFunction {
    std::function<cplx(const PhaseState&)> eval;
    std::string label;
};

// Flat coordinate indexing over (lambda_1..n, phi_1..n, V blocks, W blocks).
struct CoordinateId {
    enum class Kind { lambda, phi, framing_v, framing_w } kind;
    int j = 0;       // particle index
    int block = 0;   // framing block i (framing coordinates only)
    int alpha = 0;   // internal index a (framing coordinates only)
};

int coordinate_count(const PhaseState& state);
CoordinateId coordinate_at(const PhaseState& state, int flat_index);
cplx coordinate_value(const PhaseState& state, const CoordinateId& id);
PhaseState with_offset(const PhaseState& state, const CoordinateId& id, cplx delta);

struct FdConfig {
    double step_rel = 1e-6;   // h = step_rel * (1 + |coordinate|)
    bool imaginary_direction = false;
};

// Central difference along the real (or imaginary) axis of one complex
// coordinate; holomorphy makes both estimates agree.
cplx fd_partial(const PhaseFunction& f, const CoordinateId& id, const PhaseState& state,
                const FdConfig& cfg = FdConfig{});

// Gradient over all flat coordinates (reused by the bracket grid).
std::vector<cplx> fd_gradient(const PhaseFunction& f, const PhaseState& state,
                              const FdConfig& cfg = FdConfig{});

cplx bracket(const PhaseFunction& f, const PhaseFunction& g, const PhaseState& state,
             const FdConfig& cfg = FdConfig{});

cplx bracket_from_gradients(const PhaseState& state, const std::vector<cplx>& gf,
                            const std::vector<cplx>& gg);

struct ConjugacyReport {
    double max_lambda_theta = 0.0;  // max |{lam_j, theta_k} - delta_jk|
    double max_theta_theta = 0.0;   // max |{theta_j, theta_k}|
};

// FD brackets of the closed-form theta against the lambda coordinates.
ConjugacyReport verify_conjugacy(const PhaseState& state, const Coupling& coupling,
                                 const FdConfig& cfg = FdConfig{});

struct PartialIdentityReport {
    double fk_symmetry = 0.0;       // spinless d f_j/d lam_k vs d f_k/d lam_j
    double key_identity = 0.0;      // scalar derivative identity, random triples
    double e_partials = 0.0;        // spin analytic de/dw, de/dv vs FD (rel)
    double f_partials = 0.0;        // spin analytic df/dw, df/dv vs FD (rel)
};

// The proof-internal derivative identities. The e-checks use the on-surface
// analytic forms; f-checks the block-shifted sums. Spin fields are only
// filled when the state carries a framing.
PartialIdentityReport verify_partial_identities(const PhaseState& state, const Coupling& coupling,
                                                SampleRng& rng, const FdConfig& cfg = FdConfig{});

} // namespace ccm
