// Interpolation curves on the A_{m-1} surface: the degree n-1 polynomials
// (p_delta, q) with r(z) = p_1(z^m)/(z q(z^m)), s(z) = p_2(z^m)/(z q(z^m)),
// their incidence and Z_m-equivariance checks, and samples of the quotient
// curve on the surface a b = c^m.
#pragma once

#include <optional>
#include <string>

#include "ccm/coords.hpp"

namespace ccm {

struct CurvePolys {
    int delta = 1;       // 1: phi-curve, 2: theta-curve
    int m = 1, n = 1;
    DensePoly p;         // in the quotient variable a = z^m, degree <= n-1
    DensePoly q;         // degree exactly n-1
    std::vector<cplx> nodes;   // lambda_j^m, kept for incidence checks
    std::vector<cplx> gamma;   // lambda_j phi_j or lambda_j theta_j
};

struct QuotientSample {
    cplx z, a, b, c;
};

struct CurveConfig {
    double divisibility_tol = 1e-8;  // relative to the coefficient scale
    double two_route_tol = 1e-8;
};

// Build the curve from spectral data:
//   q(a) = m sum_j prod_{l != j} (a - lambda_l^m),
//   p(a) = m sum_j gamma_j prod_{l != j} (a - lambda_l^m).
// For m >= 2 the construction is cross-validated against the interpolated
// D (delta = 1) or C/|g| (delta = 2): those polynomials must be divisible by
// z^{m-2} with all other residue classes vanishing, and the quotient
// re-expressed in z^m must match. Throws DivisibilityViolation or
// ZeroCoupling (delta = 2 with |g| = 0).
CurvePolys curve_polys(const SpectralPoint& point, const Coupling& coupling,
                       const std::optional<SpinFraming>& framing, int delta,
                       const CurveConfig& cfg = CurveConfig{});

// max_k |q(lambda_k^m) lambda_k gamma_k - p(lambda_k^m)| / coefficient scale.
double incidence_check(const CurvePolys& curve, const SpectralPoint& point);

// Rebuild the curve from (w lambda, w^-1 phi) with the framing unchanged and
// return the max coefficient difference; p and q only depend on lambda^m and
// lambda gamma, so the distance is at roundoff level.
double equivariance_check(const SpectralPoint& point, const Coupling& coupling,
                          const std::optional<SpinFraming>& framing, int delta);

struct QuotientSamples {
    std::vector<QuotientSample> samples;
    int skipped_poles = 0;
};

// Evaluate a = z^m, c = p(a)/q(a), b = c^m / a at each z. Points with
// q(z^m) ~ 0 or z ~ 0 are skipped and counted.
QuotientSamples quotient_samples(const CurvePolys& curve, const std::vector<cplx>& zs,
                                 double pole_rel = 1e-10);

// CSV rows: z_re, z_im, a_re, a_im, b_re, b_im, c_re, c_im.
std::string quotient_samples_csv(const QuotientSamples& samples);

} // namespace ccm
