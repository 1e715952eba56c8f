#include "ccm/coords.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace ccm {

RationalFn::RationalFn(DensePoly num, DensePoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw ConfigError("RationalFn: zero denominator");
}

cplx RationalFn::eval(cplx z, double pole_rel) const {
    const cplx d = den_.eval(z);
    // compare against the denominator's value scale at z, not its coefficients
    double scale = 0.0, zp = 1.0;
    for (std::size_t k = 0; k < den_.coeffs().size(); ++k) {
        scale += std::abs(den_.coeffs()[k]) * zp;
        zp *= std::abs(z);
    }
    if (std::abs(d) <= pole_rel * std::max(scale, 1e-300))
        throw PoleAtZ("RationalFn: evaluation at a pole");
    return num_.eval(z) / d;
}

RationalFn r_function(const SpectralPoint& point, const Coupling& coupling,
                      const std::optional<SpinFraming>& framing) {
    SpectralFnBundle b = bundle(point, coupling, framing);
    return RationalFn{b.D, b.A_prime};
}

RationalFn s_function(const SpectralPoint& point, const Coupling& coupling,
                      const std::optional<SpinFraming>& framing) {
    if (std::abs(coupling.abs_g) == 0.0) throw ZeroCoupling("s_function: |g| = 0");
    SpectralFnBundle b = bundle(point, coupling, framing);
    return RationalFn{b.C, b.A_prime.scaled(coupling.abs_g)};
}

std::vector<cplx> theta_closed(const SpectralPoint& point, const Coupling& coupling,
                               const std::optional<SpinFraming>& framing) {
    check_point(point);
    const int m = point.m, n = point.n;
    std::vector<cplx> lam_pow(n);
    for (int j = 0; j < n; ++j) lam_pow[j] = std::pow(point.lambda[j], m);
    std::vector<cplx> theta(n);

    if (!framing) {
        for (int k = 0; k < n; ++k) {
            cplx f = coupling.c[m - 1] / (double(m) * point.lambda[k]);
            for (int l = 0; l < n; ++l) {
                if (l == k) continue;
                f += coupling.abs_g / (double(m) * point.lambda[k]) * lam_pow[k] /
                     (lam_pow[k] - lam_pow[l]);
            }
            theta[k] = point.phi[k] / double(m) + f;
        }
        return theta;
    }

    const SpinFraming& fr = *framing;
    std::vector<CMatrix> vw;
    vw.reserve(m);
    for (int i = 0; i < m; ++i) vw.push_back(fr.V[i] * fr.W[i]);

    auto K = [&](int i, int j) {
        i = mod_m(i, m);
        cplx prefix{}, weighted{};
        for (int r = 0; r <= i; ++r) prefix += vw[r].at(j, j);
        for (int s = 0; s < m; ++s) weighted += (double(m - s) / m) * vw[s].at(j, j);
        return coupling.c[i] - (prefix - weighted);
    };

    const cplx mg = double(m) * coupling.abs_g;
    for (int k = 0; k < n; ++k) {
        cplx e{};
        for (int i = 0; i < m; ++i) e += vw[i].at(k, k) * K(i - 1, k);
        e /= mg * point.lambda[k];

        cplx f{};
        for (int h = 0; h < m; ++h) {
            for (int i = 0; i < m; ++i) {
                const CMatrix& back = vw[mod_m(i - h - 1, m)];
                for (int t = 0; t < n; ++t) {
                    if (t == k) continue;
                    f += vw[i].at(k, t) * back.at(t, k) *
                         std::pow(point.lambda[t], m - h - 1) * std::pow(point.lambda[k], h) /
                         (lam_pow[t] - lam_pow[k]);
                }
            }
        }
        f /= -mg;
        theta[k] = point.phi[k] / double(m) + e + f;
    }
    return theta;
}

namespace {

struct CanonicalEntry {
    cplx lambda, phi, lam_pow;
};

} // namespace

OrbitCoordinates canonicalize(const SpectralPoint& point,
                              const std::optional<SpinFraming>& framing) {
    const int m = point.m, n = point.n;
    const double sector = 2.0 * std::numbers::pi / m;
    std::vector<CanonicalEntry> entries(n);
    for (int j = 0; j < n; ++j) {
        double arg = std::arg(point.lambda[j]);
        if (arg < 0.0) arg += 2.0 * std::numbers::pi;
        const int k = static_cast<int>(std::floor(arg / sector));
        const double rot = -k * sector;
        const cplx w{std::cos(rot), std::sin(rot)};
        entries[j].lambda = point.lambda[j] * w;
        entries[j].phi = point.phi[j] / w;
        entries[j].lam_pow = std::pow(point.lambda[j], m);
    }
    std::stable_sort(entries.begin(), entries.end(), [](const CanonicalEntry& a, const CanonicalEntry& b) {
        if (a.lam_pow.real() != b.lam_pow.real()) return a.lam_pow.real() < b.lam_pow.real();
        return a.lam_pow.imag() < b.lam_pow.imag();
    });
    OrbitCoordinates out;
    out.point.m = m;
    out.point.n = n;
    out.point.lambda.resize(n);
    out.point.phi.resize(n);
    for (int j = 0; j < n; ++j) {
        out.point.lambda[j] = entries[j].lambda;
        out.point.phi[j] = entries[j].phi;
    }
    out.framing = framing;
    out.canonical_form = true;
    return out;
}

OrbitCoordinates recover_spectral(const Quadruple& quad,
                                  [[maybe_unused]] const Coupling& coupling, double gap_tol) {
    const int m = quad.m, n = quad.n;
    const DensePoly A = char_poly(quad.P);

    // compress A(z) = sum a_k z^{mk} into a degree-n polynomial in a = z^m
    std::vector<cplx> compressed(n + 1);
    double offpattern = 0.0;
    for (int k = 0; k <= A.degree(); ++k) {
        if (k % m == 0) compressed[k / m] = A.coeff(k);
        else offpattern = std::max(offpattern, std::abs(A.coeff(k)));
    }
    if (offpattern > 1e-6 * std::max(A.max_abs_coeff(), 1.0))
        throw DegenerateSpectrum("recover_spectral: char poly lacks the z^m pattern");

    std::vector<cplx> mu = poly_roots(DensePoly{std::move(compressed)});
    double scale = 0.0;
    for (const cplx& v : mu) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = i + 1; j < mu.size(); ++j)
            if (std::abs(mu[i] - mu[j]) <= gap_tol * std::max(scale, 1.0))
                throw DegenerateSpectrum("recover_spectral: lambda^m values collide");

    SpectralPoint pt;
    pt.m = m;
    pt.n = n;
    pt.lambda.resize(n);
    pt.phi.resize(n);
    for (int j = 0; j < n; ++j) {
        double arg = std::arg(mu[j]);
        if (arg < 0.0) arg += 2.0 * std::numbers::pi;
        pt.lambda[j] = std::pow(std::abs(mu[j]), 1.0 / m) *
                       cplx{std::cos(arg / m), std::sin(arg / m)};
        // phi_j = D(lambda_j) / A'(lambda_j), both taken pointwise: D through
        // the cofactor-safe adjugate (z I - P is singular right here) and A'
        // as the exact product m lambda^{m-1} prod_{l != j} (mu_j - mu_l),
        // which avoids the cancellation a coefficient-form evaluation hits
        // for clustered roots.
        cplx aprime = double(m) * std::pow(pt.lambda[j], m - 1);
        for (int l = 0; l < n; ++l)
            if (l != j) aprime *= mu[j] - mu[l];
        pt.phi[j] = D_eval(quad, pt.lambda[j]) / aprime;
    }
    return canonicalize(pt);
}

double orbit_distance(const OrbitCoordinates& a, const OrbitCoordinates& b) {
    const int n = a.point.n, m = a.point.m;
    if (n != b.point.n || m != b.point.m) return std::numeric_limits<double>::infinity();

    // per-pair distance minimized over the Z_m rotation
    std::vector<double> cost(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double best = std::numeric_limits<double>::infinity();
            for (int k = 0; k < m; ++k) {
                const double rot = 2.0 * std::numbers::pi * k / m;
                const cplx w{std::cos(rot), std::sin(rot)};
                const double d = std::max(std::abs(w * a.point.lambda[i] - b.point.lambda[j]),
                                          std::abs(a.point.phi[i] / w - b.point.phi[j]));
                best = std::min(best, d);
            }
            cost[static_cast<std::size_t>(i) * n + j] = best;
        }
    }
    // assignment by bitmask DP over columns, minimizing the max pair distance
    const int full = (1 << n) - 1;
    std::vector<double> dp(static_cast<std::size_t>(full) + 1,
                           std::numeric_limits<double>::infinity());
    dp[0] = 0.0;
    for (int mask = 0; mask <= full; ++mask) {
        if (!std::isfinite(dp[mask])) continue;
        const int i = std::popcount(static_cast<unsigned>(mask));
        if (i == n) continue;
        for (int j = 0; j < n; ++j) {
            if (mask & (1 << j)) continue;
            const double v = std::max(dp[mask], cost[static_cast<std::size_t>(i) * n + j]);
            double& slot = dp[mask | (1 << j)];
            slot = std::min(slot, v);
        }
    }
    return dp[full];
}

} // namespace ccm
