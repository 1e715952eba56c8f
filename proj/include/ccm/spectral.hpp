// The gauge-invariant spectral functions A(z), A'(z), C(z), D(z), the closed
// resolvent of the dual Lax matrix, and the m = 1 spectral-parameter Lax
// identities. Each quantity has a closed-form route and an independent
// matrix-oracle route.
#pragma once

#include <optional>

#include "ccm/model.hpp"

namespace ccm {

struct SpectralFnBundle {
    DensePoly A;        // monic, degree mn
    DensePoly A_prime;  // formal derivative of A
    DensePoly C;        // interpolated from the quadruple, degree <= mn-2
    DensePoly D;        // interpolated from the quadruple, degree <= mn-2
};

// Closed form A(z) = prod_j (z^m - lambda_j^m).
cplx A_closed(const SpectralPoint& point, cplx z);

// A as a polynomial in z, expanded exactly from the lambda^m values.
DensePoly A_poly(const SpectralPoint& point);

// Closed resolvent of z I - L~ as an m x m grid of diagonal n x n blocks,
// block (h,i) = z^{(m-(i-h+1)) mod m} (z^m - L^m)^{-1} L^{(i-h) mod m}.
// Exponents are read modulo m, which is also the only consistent reading at
// m = 1. Throws PoleAtZ when z^m hits a lambda_j^m or z = 0.
CMatrix resolvent_closed(const SpectralPoint& point, cplx z, double pole_tol = 1e-12);

// Matrix-route evaluations on a quadruple; total in z because the adjugate
// stays finite on the spectrum.
cplx D_eval(const Quadruple& quad, cplx z, const Tolerances& tol = default_tol());
cplx C_eval(const Quadruple& quad, cplx z, const Tolerances& tol = default_tol());

struct BundleConfig {
    // Interpolation nodes sit on a circle of radius node_radius_factor *
    // max|lambda| (scaled roots of unity). Keeping the circle close to the
    // spectrum preserves relative accuracy of D and C near the lambda_k.
    double node_radius_factor = 1.1;
};

// A, A' from closed forms; C, D reconstructed by sampling C_eval/D_eval at
// mn off-spectrum nodes and interpolating (degree <= mn-2 < mn).
SpectralFnBundle bundle(const SpectralPoint& point, const Coupling& coupling,
                        const std::optional<SpinFraming>& framing = std::nullopt,
                        const BundleConfig& cfg = BundleConfig{});

// m = 1 spectral-parameter Lax matrix L(z) = L + i g z^{-1} e e^T with
// L_{jk} = p_j delta_{jk} + i g / (q_j - q_k).
CMatrix classic_lax(const QModelPoint& qp, cplx g, cplx z);

struct ClassicCurve {
    DensePoly P0;  // char poly of L
    DensePoly P1;  // e^T adj(Lam I - L) e as a polynomial in Lam
};

// The rational spectral curve data: det(Lam I - L(z)) = P0(Lam) - i g z^{-1} P1(Lam).
ClassicCurve classic_curve(const QModelPoint& qp, cplx g);

} // namespace ccm
