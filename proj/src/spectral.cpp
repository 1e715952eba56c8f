#include "ccm/spectral.hpp"

#include <cmath>
#include <numbers>

namespace ccm {

cplx A_closed(const SpectralPoint& point, cplx z) {
    const cplx zp = std::pow(z, point.m);
    cplx acc{1.0, 0.0};
    for (int j = 0; j < point.n; ++j) acc *= zp - std::pow(point.lambda[j], point.m);
    return acc;
}

DensePoly A_poly(const SpectralPoint& point) {
    std::vector<cplx> lam_pow(point.n);
    for (int j = 0; j < point.n; ++j) lam_pow[j] = std::pow(point.lambda[j], point.m);
    const DensePoly in_a = DensePoly::from_roots(lam_pow);
    // substitute a = z^m
    std::vector<cplx> c(static_cast<std::size_t>(point.m) * point.n + 1);
    for (int k = 0; k <= in_a.degree(); ++k) c[static_cast<std::size_t>(k) * point.m] = in_a.coeff(k);
    return DensePoly{std::move(c), 0.0};
}

CMatrix resolvent_closed(const SpectralPoint& point, cplx z, double pole_tol) {
    const int m = point.m, n = point.n;
    if (std::abs(z) <= pole_tol) throw PoleAtZ("resolvent_closed: z = 0");
    const cplx zp = std::pow(z, m);
    std::vector<cplx> lam_pow(n);
    double scale = std::abs(zp);
    for (int j = 0; j < n; ++j) {
        lam_pow[j] = std::pow(point.lambda[j], m);
        scale = std::max(scale, std::abs(lam_pow[j]));
    }
    for (int j = 0; j < n; ++j)
        if (std::abs(zp - lam_pow[j]) <= pole_tol * std::max(scale, 1.0))
            throw PoleAtZ("resolvent_closed: z^m hits the spectrum");

    CMatrix R(static_cast<std::size_t>(m) * n, static_cast<std::size_t>(m) * n);
    for (int h = 0; h < m; ++h) {
        for (int i = 0; i < m; ++i) {
            const int ze = mod_m(m - (i - h + 1), m);
            const int le = mod_m(i - h, m);
            const cplx zf = std::pow(z, ze);
            for (int j = 0; j < n; ++j)
                R.at(h * n + j, i * n + j) =
                    zf * std::pow(point.lambda[j], le) / (zp - lam_pow[j]);
        }
    }
    return R;
}

cplx D_eval(const Quadruple& quad, cplx z, const Tolerances& tol) {
    const std::size_t N = quad.P.rows();
    CMatrix M = CMatrix::identity(N).scaled(z) - quad.P;
    return (quad.X * adjugate(M, tol)).trace();
}

cplx C_eval(const Quadruple& quad, cplx z, const Tolerances& tol) {
    const std::size_t N = quad.P.rows();
    CMatrix M = CMatrix::identity(N).scaled(z) - quad.P;
    return (quad.w * quad.X * adjugate(M, tol) * quad.v).trace();
}

namespace {

SpectralFnBundle interpolate_cd(const Quadruple& quad, const DensePoly& A, double radius) {
    const int N = quad.m * quad.n;
    std::vector<cplx> nodes(N), dvals(N), cvals(N);
    for (int k = 0; k < N; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / N + 0.25;
        // interpolate in the scaled variable w = z / radius: the node set is
        // then a root-of-unity grid, which keeps the Vandermonde solve tame
        nodes[k] = cplx{std::cos(angle), std::sin(angle)};
        const cplx z = radius * nodes[k];
        dvals[k] = D_eval(quad, z);
        cvals[k] = C_eval(quad, z);
    }
    auto unscale = [&](const DensePoly& p) {
        std::vector<cplx> c = p.coeffs();
        double rpow = 1.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            c[k] /= rpow;
            rpow *= radius;
        }
        return DensePoly{std::move(c)};
    };
    SpectralFnBundle b;
    b.A = A;
    b.A_prime = A.derivative();
    b.D = unscale(lagrange_interp(nodes, dvals));
    b.C = unscale(lagrange_interp(nodes, cvals));
    return b;
}

} // namespace

SpectralFnBundle bundle(const SpectralPoint& point, const Coupling& coupling,
                        const std::optional<SpinFraming>& framing, const BundleConfig& cfg) {
    const Quadruple quad = build_dual(point, coupling, framing);
    double lam_max = 0.0;
    for (const cplx& l : point.lambda) lam_max = std::max(lam_max, std::abs(l));
    const double radius = cfg.node_radius_factor * std::max(lam_max, 1.0);
    return interpolate_cd(quad, A_poly(point), radius);
}

CMatrix classic_lax(const QModelPoint& qp, cplx g, cplx z) {
    if (qp.m != 1) throw ConfigError("classic_lax: requires m = 1");
    const int n = qp.n;
    const cplx ig = cplx{0.0, 1.0} * g;
    CMatrix L(n, n);
    for (int j = 0; j < n; ++j) {
        L.at(j, j) = qp.p[j];
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const cplx dq = qp.q[j] - qp.q[k];
            if (std::abs(dq) == 0.0) throw DegeneratePoint("classic_lax: coinciding positions");
            L.at(j, k) = ig / dq;
        }
    }
    const cplx rank1 = ig / z;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) L.at(j, k) += rank1;
    return L;
}

ClassicCurve classic_curve(const QModelPoint& qp, cplx g) {
    if (qp.m != 1) throw ConfigError("classic_curve: requires m = 1");
    const int n = qp.n;
    const cplx ig = cplx{0.0, 1.0} * g;
    CMatrix L(n, n);
    for (int j = 0; j < n; ++j) {
        L.at(j, j) = qp.p[j];
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const cplx dq = qp.q[j] - qp.q[k];
            if (std::abs(dq) == 0.0) throw DegeneratePoint("classic_curve: coinciding positions");
            L.at(j, k) = ig / dq;
        }
    }
    ClassicCurve out;
    out.P0 = char_poly(L);
    // P1(Lam) = e^T adj(Lam I - L) e, a polynomial of degree n-1; recover it
    // by interpolation at n points off the spectrum of L
    const double radius = 2.0 * std::max(L.inf_norm(), 1.0);
    std::vector<cplx> nodes(n), vals(n);
    for (int k = 0; k < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / n + 0.15;
        nodes[k] = radius * cplx{std::cos(angle), std::sin(angle)};
        const CMatrix M = CMatrix::identity(n).scaled(nodes[k]) - L;
        const CMatrix adj = adjugate(M);
        cplx s{};
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s += adj.at(a, b);
        vals[k] = s;
    }
    out.P1 = lagrange_interp(nodes, vals);
    return out;
}

} // namespace ccm
