#include "ccm/curves.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ccm {

namespace {

DensePoly nodal_sum(const std::vector<cplx>& nodes, const std::vector<cplx>& weights, int m) {
    // m * sum_j w_j prod_{l != j} (a - node_l)
    const DensePoly master = DensePoly::from_roots(nodes);
    std::vector<cplx> acc(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const DensePoly basis = master.deflate(nodes[j]);
        for (std::size_t k = 0; k < basis.coeffs().size(); ++k)
            acc[k] += double(m) * weights[j] * basis.coeffs()[k];
    }
    return DensePoly{std::move(acc)};
}

// Strip the z^{m-2} prefactor from a polynomial supported on exponents
// congruent to m-2 (mod m) and re-express it in a = z^m. Reports the largest
// off-pattern coefficient.
DensePoly compress_mod_m(const DensePoly& poly, int m, int shift, double* offpattern) {
    std::vector<cplx> out;
    double worst = 0.0;
    for (int k = 0; k <= poly.degree(); ++k) {
        if (mod_m(k - shift, m) == 0 && k >= shift) {
            const int idx = (k - shift) / m;
            if (static_cast<int>(out.size()) <= idx) out.resize(idx + 1);
            out[static_cast<std::size_t>(idx)] = poly.coeff(k);
        } else {
            worst = std::max(worst, std::abs(poly.coeff(k)));
        }
    }
    if (offpattern) *offpattern = worst;
    return DensePoly{std::move(out)};
}

double coeff_distance(const DensePoly& a, const DensePoly& b) {
    double worst = 0.0;
    const int deg = std::max(a.degree(), b.degree());
    for (int k = 0; k <= deg; ++k) worst = std::max(worst, std::abs(a.coeff(k) - b.coeff(k)));
    return worst;
}

} // namespace

CurvePolys curve_polys(const SpectralPoint& point, const Coupling& coupling,
                       const std::optional<SpinFraming>& framing, int delta,
                       const CurveConfig& cfg) {
    check_point(point);
    if (delta != 1 && delta != 2) throw ConfigError("curve_polys: delta must be 1 or 2");
    if (delta == 2 && std::abs(coupling.abs_g) == 0.0)
        throw ZeroCoupling("curve_polys: theta-curve needs |g| != 0");
    const int m = point.m, n = point.n;

    CurvePolys curve;
    curve.delta = delta;
    curve.m = m;
    curve.n = n;
    curve.nodes.resize(n);
    for (int j = 0; j < n; ++j) curve.nodes[j] = std::pow(point.lambda[j], m);

    curve.gamma.resize(n);
    if (delta == 1) {
        for (int j = 0; j < n; ++j) curve.gamma[j] = point.lambda[j] * point.phi[j];
    } else {
        const std::vector<cplx> theta = theta_closed(point, coupling, framing);
        for (int j = 0; j < n; ++j) curve.gamma[j] = point.lambda[j] * theta[j];
    }

    const std::vector<cplx> ones(n, cplx{1.0, 0.0});
    curve.q = nodal_sum(curve.nodes, ones, m);
    curve.p = nodal_sum(curve.nodes, curve.gamma, m);

    // Two-route validation against the interpolated spectral polynomials.
    // The z^{m-2} divisibility and residue-class structure only bite for
    // m >= 2; at m = 1 the closed resolvent reads the exponents mod m and the
    // construction is covered by the incidence check instead.
    if (m >= 2) {
        const SpectralFnBundle b = bundle(point, coupling, framing);
        const DensePoly& source = (delta == 1) ? b.D : b.C;
        const double scale = std::max(source.max_abs_coeff(), 1.0);
        double offpattern = 0.0;
        DensePoly via_division = compress_mod_m(source, m, m - 2, &offpattern);
        if (offpattern > cfg.divisibility_tol * scale)
            throw DivisibilityViolation("curve_polys: spectral polynomial not divisible by z^{m-2}");
        if (delta == 2) via_division = via_division.scaled(1.0 / coupling.abs_g);
        const double dist = coeff_distance(via_division, curve.p);
        const double cmp_scale =
            std::max({curve.p.max_abs_coeff(), via_division.max_abs_coeff(), 1.0});
        if (dist > cfg.two_route_tol * cmp_scale)
            throw DivisibilityViolation("curve_polys: division route disagrees with nodal sums");
    }
    return curve;
}

double incidence_check(const CurvePolys& curve, const SpectralPoint& point) {
    const double scale = std::max({curve.p.max_abs_coeff(), curve.q.max_abs_coeff(), 1.0});
    double worst = 0.0;
    for (int k = 0; k < point.n; ++k) {
        const cplx a = std::pow(point.lambda[k], curve.m);
        const cplx resid = curve.q.eval(a) * curve.gamma[k] - curve.p.eval(a);
        worst = std::max(worst, std::abs(resid) / scale);
    }
    return worst;
}

double equivariance_check(const SpectralPoint& point, const Coupling& coupling,
                          const std::optional<SpinFraming>& framing, int delta) {
    const CurvePolys base = curve_polys(point, coupling, framing, delta);
    SpectralPoint rotated = point;
    const double angle = 2.0 * std::numbers::pi / point.m;
    const cplx w{std::cos(angle), std::sin(angle)};
    for (int j = 0; j < point.n; ++j) {
        rotated.lambda[j] *= w;
        rotated.phi[j] /= w;
    }
    // the Z_m generator leaves the framing blocks untouched
    const CurvePolys rot = curve_polys(rotated, coupling, framing, delta);
    const double scale = std::max({base.p.max_abs_coeff(), base.q.max_abs_coeff(), 1.0});
    return std::max(coeff_distance(base.p, rot.p), coeff_distance(base.q, rot.q)) / scale;
}

QuotientSamples quotient_samples(const CurvePolys& curve, const std::vector<cplx>& zs,
                                 double pole_rel) {
    QuotientSamples out;
    const double qscale = std::max(curve.q.max_abs_coeff(), 1e-300);
    for (const cplx& z : zs) {
        if (std::abs(z) < pole_rel) {
            ++out.skipped_poles;
            continue;
        }
        const cplx a = std::pow(z, curve.m);
        const cplx qa = curve.q.eval(a);
        if (std::abs(qa) <= pole_rel * qscale * std::max(1.0, std::pow(std::abs(a), curve.q.degree()))) {
            ++out.skipped_poles;
            continue;
        }
        QuotientSample s;
        s.z = z;
        s.a = a;
        s.c = curve.p.eval(a) / qa;
        s.b = std::pow(s.c, curve.m) / a;
        out.samples.push_back(s);
    }
    return out;
}

std::string quotient_samples_csv(const QuotientSamples& samples) {
    std::ostringstream os;
    os.precision(17);
    os << "z_re,z_im,a_re,a_im,b_re,b_im,c_re,c_im\n";
    for (const QuotientSample& s : samples.samples) {
        os << s.z.real() << ',' << s.z.imag() << ',' << s.a.real() << ',' << s.a.imag() << ','
           << s.b.real() << ',' << s.b.imag() << ',' << s.c.real() << ',' << s.c.imag() << '\n';
    }
    return os.str();
}

} // namespace ccm
