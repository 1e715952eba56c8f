// Canonical spectral coordinates: the rational functions r(z) and s(z), the
// conjugate variables phi and theta in closed form, and recovery of spectral
// coordinates from a gauge-orbit representative.
#pragma once

#include <optional>

#include "ccm/spectral.hpp"

namespace ccm {

class RationalFn {
  public:
    RationalFn() = default;
    RationalFn(DensePoly num, DensePoly den);

    const DensePoly& num() const { return num_; }
    const DensePoly& den() const { return den_; }

    // Throws PoleAtZ when |den(z)| falls below pole_rel * den coefficient scale.
    cplx eval(cplx z, double pole_rel = 1e-12) const;

  private:
    DensePoly num_, den_;
};

struct OrbitCoordinates {
    SpectralPoint point;
    std::optional<SpinFraming> framing;
    bool canonical_form = false;
};

// r(z) = D(z) / A'(z); r(lambda_k) = phi_k.
RationalFn r_function(const SpectralPoint& point, const Coupling& coupling,
                      const std::optional<SpinFraming>& framing = std::nullopt);

// s(z) = C(z) / (|g| A'(z)); s(lambda_k) = theta_k. Throws ZeroCoupling when
// |g| = 0.
RationalFn s_function(const SpectralPoint& point, const Coupling& coupling,
                      const std::optional<SpinFraming>& framing = std::nullopt);

// Closed-form conjugate variables theta_k = phi_k/m + e_k + f_k.
//
// Spinless: e-part c_{m-1}/(m lambda_k), interaction
//   + (|g|/(m lambda_k)) sum_{l != k} lambda_k^m / (lambda_k^m - lambda_l^m).
// Spin: e_k sums [V_i W_i]_{kk} against the dual model's diagonal correction
// at block i-1 (indices mod m), f_k is the double block sum with mod-m index
// i-h-1. These are exactly the values s(lambda_k) takes on the built
// quadruple.
std::vector<cplx> theta_closed(const SpectralPoint& point, const Coupling& coupling,
                               const std::optional<SpinFraming>& framing = std::nullopt);

// Bring each lambda_j argument into [0, 2pi/m) by the (lambda, phi) ->
// (w^k lambda, w^-k phi) action, then sort lexicographically by
// (Re lambda^m, Im lambda^m).
OrbitCoordinates canonicalize(const SpectralPoint& point,
                              const std::optional<SpinFraming>& framing = std::nullopt);

// Recover canonical spectral coordinates from any quadruple over the dense
// diagonalizable subset: lambda_j^m are the roots of the z^m-compressed
// characteristic polynomial of P, phi_j = r(lambda_j) through the
// interpolated D. Throws DegenerateSpectrum when the lambda^m values collide.
OrbitCoordinates recover_spectral(const Quadruple& quad, const Coupling& coupling,
                                  double gap_tol = 1e-8);

// Distance between S_n x Z_m orbits of two coordinate sets: assignment over
// permutations (bitmask DP) of the per-pair Z_m-minimal max entrywise
// distance.
double orbit_distance(const OrbitCoordinates& a, const OrbitCoordinates& b);

} // namespace ccm
