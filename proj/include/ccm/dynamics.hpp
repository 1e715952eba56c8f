// Hamiltonians in trace and spectral form, the exact flow in spectral
// coordinates, projection to particle positions, and the m = 1 ODE
// cross-check.
#pragma once

#include <optional>

#include "ccm/model.hpp"

namespace ccm {

struct FlowSpec {
    int K = 1;        // which Hamiltonian H_K, 1 <= K <= n
    cplx t{};         // flow time (complex allowed)
    int steps = 1;    // only the ODE route discretizes
};

// H_K = (1/(mK)) tr(P^{mK}) on a quadruple.
cplx H_trace(const Quadruple& quad, int K);

// The same Hamiltonian in spectral coordinates: (1/K) sum_j lambda_j^{mK}.
cplx H_spectral(const SpectralPoint& point, int K);

// Exact flow of H_K in spectral coordinates: lambda is fixed and
// phi_j(t) = phi_j(0) + m^2 lambda_j^{mK-1} t. The sign of the shift is the
// one under which the m = 1 projection reproduces the ODE flow of the
// particle system.
SpectralPoint evolve(const SpectralPoint& point, const FlowSpec& flow);

// Particle positions of the orbit: eigenvalues of the V_0-restricted product
// X_{m-1} ... X_0 of the rebuilt dual representative. Returns q_j^m for
// m >= 2 and the q_j themselves for m = 1.
std::vector<cplx> positions(const SpectralPoint& point, const Coupling& coupling,
                            const std::optional<SpinFraming>& framing = std::nullopt);

// Same spectrum extracted from an arbitrary (possibly gauged) quadruple via
// the z^m-compressed characteristic polynomial of X.
std::vector<cplx> position_spectrum(const Quadruple& quad);

// Fixed-step RK4 for the m = 1 particle system with Hamiltonian
// H = sum p^2/2 + gamma sum_{j<k} (q_j - q_k)^{-2}. Throws CollisionDetected
// when positions approach within the guard gap.
QModelPoint integrate_eom(const QModelPoint& qp, cplx gamma, cplx t, int steps,
                          double collision_gap = 1e-6);

// Multiset distance between two complex vectors (min over matchings of the
// max entry distance).
double multiset_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

} // namespace ccm
