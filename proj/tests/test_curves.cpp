#include "doctest.h"

#include <cmath>

#include "ccm/curves.hpp"
#include "ccm/verify.hpp"
#include "test_support.hpp"

using namespace ccm;
using ccmtest::cdist;
using ccmtest::coupling_of;
using ccmtest::make_point;

TEST_CASE("curve_polys basics") {
    {
        // m=1, n=1, lambda=2, phi=3: q = 1, p1 = lambda*phi = 6
        const Coupling c = coupling_of({cplx{1, 0}});
        const SpectralPoint pt = make_point(1, {cplx{2, 0}}, {cplx{3, 0}});
        const CurvePolys curve = curve_polys(pt, c, std::nullopt, 1);
        CHECK(curve.q.degree() == 0);
        CHECK(cdist(curve.q.coeff(0), cplx{1, 0}) < 1e-14);
        CHECK(cdist(curve.p.coeff(0), cplx{6, 0}) < 1e-14);
        CHECK(incidence_check(curve, pt) < 1e-14);
    }
    {
        // n=1 at any m: constants with exact incidence
        const Coupling c = coupling_of({cplx{1, 0}, cplx{0.3, 0.1}, cplx{-0.2, 0.4}});
        const SpectralPoint pt = make_point(3, {cplx{1.2, 0.3}}, {cplx{0.7, -0.5}});
        for (int delta : {1, 2}) {
            const CurvePolys curve = curve_polys(pt, c, std::nullopt, delta);
            CHECK(curve.p.degree() <= 0);
            CHECK(curve.q.degree() == 0);
            CHECK(incidence_check(curve, pt) < 1e-12);
        }
    }
    {
        CHECK_THROWS_AS(curve_polys(make_point(1, {cplx{2, 0}}, {cplx{1, 0}}),
                                    coupling_of({cplx{0, 0}}), std::nullopt, 2),
                        ZeroCoupling);
    }
}

TEST_CASE("curve two-route agreement and degree") {
    SampleRng rng(41);
    for (int rep = 0; rep < 30; ++rep) {
        const RandomCase c = draw_case(rng, 4, 5, 3);
        for (int delta : {1, 2}) {
            // curve_polys itself runs the division-route cross-check for m >= 2
            const CurvePolys curve = curve_polys(c.point, c.coupling, c.framing, delta);
            CHECK(curve.q.degree() == c.point.n - 1);
            CHECK(curve.p.degree() <= c.point.n - 1);
            CHECK(incidence_check(curve, c.point) <= 1e-8);
        }
    }
}

TEST_CASE("incidence sensitivity") {
    SampleRng rng(42);
    const RandomCase c = draw_case(rng, 2, 3, 0);
    const CurvePolys curve = curve_polys(c.point, c.coupling, c.framing, 1);
    SpectralPoint perturbed = c.point;
    perturbed.phi[0] += 0.1;
    CurvePolys stale = curve;
    for (int j = 0; j < c.point.n; ++j)
        stale.gamma[j] = perturbed.lambda[j] * perturbed.phi[j];
    CHECK(incidence_check(stale, perturbed) >= 1e-3);
}

TEST_CASE("equivariance") {
    {
        // m=1: omega = 1, nothing moves
        SampleRng rng(43);
        const RandomCase c = draw_case(rng, 1, 3, 0);
        CHECK(equivariance_check(c.point, c.coupling, c.framing, 1) < 1e-14);
    }
    SampleRng rng(44);
    for (int rep = 0; rep < 20; ++rep) {
        const RandomCase c = draw_case(rng, 4, 4, 2);
        for (int delta : {1, 2})
            CHECK(equivariance_check(c.point, c.coupling, c.framing, delta) <= 1e-9);
    }
}

TEST_CASE("quotient samples") {
    SampleRng rng(45);
    for (int rep = 0; rep < 15; ++rep) {
        const RandomCase c = draw_case(rng, 3, 4, 2);
        const CurvePolys curve = curve_polys(c.point, c.coupling, c.framing, 2);

        double lam_max = 0.0;
        for (const cplx& l : c.point.lambda) lam_max = std::max(lam_max, std::abs(l));
        std::vector<cplx> zs(12);
        for (cplx& z : zs) z = rng.annulus(0.5 * lam_max, 1.6 * lam_max);
        const QuotientSamples qs = quotient_samples(curve, zs);
        CHECK(qs.samples.size() + qs.skipped_poles == zs.size());
        for (const QuotientSample& s : qs.samples) {
            const double ab_scale = std::max(1.0, std::abs(std::pow(s.c, curve.m)));
            CHECK(std::abs(s.a * s.b - std::pow(s.c, curve.m)) <= 1e-12 * ab_scale);
            const cplx lhs = curve.q.eval(s.a) * s.c - curve.p.eval(s.a);
            const double scale =
                std::max(1.0, std::abs(curve.q.eval(s.a) * s.c) + std::abs(curve.p.eval(s.a)));
            CHECK(std::abs(lhs) / scale <= 1e-9);
        }

        // sampling exactly at z = lambda_k returns c = lambda_k gamma_k / lambda_k... i.e.
        // the curve passes through (a_k, lambda_k theta_k)
        const QuotientSamples at_nodes = quotient_samples(curve, c.point.lambda);
        for (std::size_t idx = 0; idx < at_nodes.samples.size(); ++idx) {
            const QuotientSample& s = at_nodes.samples[idx];
            double best = 1e18;
            for (int k = 0; k < c.point.n; ++k)
                best = std::min(best, std::abs(s.c - curve.gamma[k]));
            CHECK(best <= 1e-8 * std::max(1.0, std::abs(s.c)));
        }
    }

    // CSV shape
    const Coupling c = coupling_of({cplx{1, 0}});
    const SpectralPoint pt = make_point(1, {cplx{2, 0}}, {cplx{3, 0}});
    const CurvePolys curve = curve_polys(pt, c, std::nullopt, 1);
    const QuotientSamples qs = quotient_samples(curve, {cplx{1, 0}, cplx{0, 0}, cplx{2, 1}});
    CHECK(qs.skipped_poles == 1);  // z = 0
    const std::string csv = quotient_samples_csv(qs);
    CHECK(csv.find("z_re,z_im,a_re,a_im,b_re,b_im,c_re,c_im\n") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows
}
