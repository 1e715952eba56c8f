#include "ccm/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace ccm {

cplx H_trace(const Quadruple& quad, int K) {
    if (K < 1) throw ConfigError("H_trace: K >= 1 required");
    const int power = quad.m * K;
    CMatrix acc = quad.P;
    for (int k = 1; k < power; ++k) acc = acc * quad.P;
    return acc.trace() / double(quad.m * K);
}

cplx H_spectral(const SpectralPoint& point, int K) {
    if (K < 1) throw ConfigError("H_spectral: K >= 1 required");
    cplx acc{};
    for (int j = 0; j < point.n; ++j) acc += std::pow(point.lambda[j], point.m * K);
    return acc / double(K);
}

SpectralPoint evolve(const SpectralPoint& point, const FlowSpec& flow) {
    if (flow.steps < 1) throw ConfigError("evolve: steps >= 1 required");
    if (flow.K < 1) throw ConfigError("evolve: K >= 1 required");
    SpectralPoint out = point;
    const double m2 = double(point.m) * double(point.m);
    for (int j = 0; j < point.n; ++j)
        out.phi[j] += m2 * std::pow(point.lambda[j], point.m * flow.K - 1) * flow.t;
    return out;
}

std::vector<cplx> positions(const SpectralPoint& point, const Coupling& coupling,
                            const std::optional<SpinFraming>& framing) {
    const Quadruple quad = build_dual(point, coupling, framing);
    const int m = quad.m, n = quad.n;
    // product X_{m-1} ... X_0 on V_0, read off the intact blocks
    auto block = [&](int i) {
        CMatrix B(n, n);
        const int row = mod_m(i + 1, m), col = i;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) B.at(r, c) = quad.X.at(row * n + r, col * n + c);
        return B;
    };
    CMatrix prod = block(0);
    for (int i = 1; i < m; ++i) prod = block(i) * prod;
    std::vector<cplx> spectrum = eigenvalues(prod);
    // the product eigenvalues are q_j^m; for m = 1 they are the q_j directly
    return spectrum;
}

std::vector<cplx> position_spectrum(const Quadruple& quad) {
    const int m = quad.m, n = quad.n;
    const DensePoly p = char_poly(quad.X);
    std::vector<cplx> compressed(n + 1);
    double offpattern = 0.0;
    for (int k = 0; k <= p.degree(); ++k) {
        if (k % m == 0) compressed[k / m] = p.coeff(k);
        else offpattern = std::max(offpattern, std::abs(p.coeff(k)));
    }
    if (offpattern > 1e-6 * std::max(p.max_abs_coeff(), 1.0))
        throw DegenerateSpectrum("position_spectrum: char poly lacks the z^m pattern");
    std::vector<cplx> mu = poly_roots(DensePoly{std::move(compressed)});
    if (m == 1) return mu;
    return mu;  // q_j^m either way; the m = 1 compression is the identity
}

QModelPoint integrate_eom(const QModelPoint& qp, cplx gamma, cplx t, int steps,
                          double collision_gap) {
    if (qp.m != 1) throw ConfigError("integrate_eom: requires m = 1");
    if (steps < 1) throw ConfigError("integrate_eom: steps >= 1 required");
    const int n = qp.n;

    auto accel = [&](const std::vector<cplx>& q) {
        std::vector<cplx> a(n);
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                if (k == j) continue;
                const cplx dq = q[j] - q[k];
                if (std::abs(dq) < collision_gap)
                    throw CollisionDetected("integrate_eom: positions collided");
                a[j] += 2.0 * gamma / (dq * dq * dq);
            }
        }
        return a;
    };

    std::vector<cplx> q = qp.q, p = qp.p;
    const cplx h = t / double(steps);
    for (int s = 0; s < steps; ++s) {
        // classical RK4 on (q' = p, p' = accel(q))
        const std::vector<cplx> k1q = p;
        const std::vector<cplx> k1p = accel(q);
        std::vector<cplx> q2(n), p2(n);
        for (int j = 0; j < n; ++j) {
            q2[j] = q[j] + 0.5 * h * k1q[j];
            p2[j] = p[j] + 0.5 * h * k1p[j];
        }
        const std::vector<cplx> k2q = p2;
        const std::vector<cplx> k2p = accel(q2);
        std::vector<cplx> q3(n), p3(n);
        for (int j = 0; j < n; ++j) {
            q3[j] = q[j] + 0.5 * h * k2q[j];
            p3[j] = p[j] + 0.5 * h * k2p[j];
        }
        const std::vector<cplx> k3q = p3;
        const std::vector<cplx> k3p = accel(q3);
        std::vector<cplx> q4(n), p4(n);
        for (int j = 0; j < n; ++j) {
            q4[j] = q[j] + h * k3q[j];
            p4[j] = p[j] + h * k3p[j];
        }
        const std::vector<cplx> k4q = p4;
        const std::vector<cplx> k4p = accel(q4);
        for (int j = 0; j < n; ++j) {
            q[j] += h / 6.0 * (k1q[j] + 2.0 * k2q[j] + 2.0 * k3q[j] + k4q[j]);
            p[j] += h / 6.0 * (k1p[j] + 2.0 * k2p[j] + 2.0 * k3p[j] + k4p[j]);
        }
    }
    QModelPoint out;
    out.m = 1;
    out.n = n;
    out.p = std::move(p);
    out.q = std::move(q);
    return out;
}

double multiset_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    const int n = static_cast<int>(a.size());
    if (b.size() != a.size()) return std::numeric_limits<double>::infinity();
    if (n == 0) return 0.0;
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
            const double v = std::max(dp[mask], std::abs(a[i] - b[j]));
            double& slot = dp[mask | (1 << j)];
            slot = std::min(slot, v);
        }
    }
    return dp[full];
}

} // namespace ccm
