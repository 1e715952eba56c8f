#include "doctest.h"

#include <cmath>

#include "ccm/spectral.hpp"
#include "ccm/verify.hpp"
#include "test_support.hpp"

using namespace ccm;
using ccmtest::cdist;
using ccmtest::coupling_of;
using ccmtest::make_point;
using ccmtest::rel;

TEST_CASE("A_closed") {
    const SpectralPoint pt = make_point(2, {cplx{1, 0}, cplx{2, 0}}, {cplx{0, 0}, cplx{0, 0}});
    CHECK(cdist(A_closed(pt, cplx{0, 0}), cplx{4, 0}) < 1e-14);  // (0-1)(0-4)
    CHECK(std::abs(A_closed(pt, pt.lambda[0])) < 1e-14);

    SampleRng rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        const RandomCase c = draw_case(rng, 4, 4, 2);
        const Quadruple quad = build_dual(c.point, c.coupling, c.framing);
        for (int t = 0; t < 10; ++t) {
            const cplx z = rng.annulus(2.1, 3.0);
            const cplx closed = A_closed(c.point, z);
            const cplx via_det =
                determinant(CMatrix::identity(quad.P.rows()).scaled(z) - quad.P);
            CHECK(cdist(via_det, closed) <= 1e-9 * std::abs(closed));
        }
        // the expanded polynomial agrees with the pointwise product
        const DensePoly A = A_poly(c.point);
        const cplx z = rng.annulus(0.7, 1.9);
        CHECK(rel(A.eval(z), A_closed(c.point, z)) < 1e-11);
    }
}

TEST_CASE("resolvent_closed") {
    {
        const SpectralPoint pt = make_point(1, {cplx{2, 0}}, {cplx{0, 0}});
        const CMatrix R = resolvent_closed(pt, cplx{3, 0});
        CHECK(cdist(R.at(0, 0), cplx{1, 0}) < 1e-14);
        CHECK_THROWS_AS(resolvent_closed(pt, cplx{2, 0}), PoleAtZ);
        CHECK_THROWS_AS(resolvent_closed(pt, cplx{0, 0}), PoleAtZ);
    }
    SampleRng rng(21);
    for (int rep = 0; rep < 10; ++rep) {
        const RandomCase c = draw_case(rng, 3, 2, 0);
        const Quadruple quad = build_dual(c.point, c.coupling, c.framing);
        const std::size_t N = quad.P.rows();
        const cplx z = rng.annulus(2.2, 3.0);
        const CMatrix R = resolvent_closed(c.point, z);
        const CMatrix M = CMatrix::identity(N).scaled(z) - quad.P;
        CHECK((M * R - CMatrix::identity(N)).max_norm() <= 1e-10);
        CHECK((R - lu_solve(M, CMatrix::identity(N))).max_norm() <= 1e-9);
    }
}

TEST_CASE("D and C evaluation") {
    {
        // m=1, n=1, lambda=2, phi=3, g=1: D(z) = C(z) = 3 for every z
        const Coupling c = coupling_of({cplx{1, 0}});
        const SpectralPoint pt = make_point(1, {cplx{2, 0}}, {cplx{3, 0}});
        const Quadruple quad = build_dual(pt, c);
        for (const double zr : {0.5, 2.0, 5.0}) {
            CHECK(cdist(D_eval(quad, cplx{zr, 0}), cplx{3, 0}) < 1e-12);
            CHECK(cdist(C_eval(quad, cplx{zr, 0}), cplx{3, 0}) < 1e-12);
        }
    }
    {
        // gauge invariance of the evaluations
        SampleRng rng(55);
        const RandomCase c = draw_case(rng, 3, 3, 2);
        const Quadruple quad = build_dual(c.point, c.coupling, c.framing);
        const std::size_t N = quad.X.rows();
        CMatrix M = CMatrix::identity(N);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) M.at(i, j) += 0.15 * rng.unit_disk();
        const Quadruple gq = gauge(quad, M);
        for (int t = 0; t < 4; ++t) {
            const cplx z = rng.annulus(2.2, 3.2);
            CHECK(rel(D_eval(gq, z), D_eval(quad, z)) <= 1e-7);
            CHECK(rel(C_eval(gq, z), C_eval(quad, z)) <= 1e-7);
        }
    }
    {
        // spinless closed form of D at off-spectrum z (the c_i terms cancel)
        SampleRng rng(56);
        for (int rep = 0; rep < 8; ++rep) {
            const RandomCase c = draw_case(rng, 4, 4, 0);
            if (c.point.m < 2) continue;
            const Quadruple quad = build_dual(c.point, c.coupling, c.framing);
            const cplx z = rng.annulus(2.2, 3.2);
            const cplx zp = std::pow(z, c.point.m);
            cplx closed{};
            for (int j = 0; j < c.point.n; ++j) {
                cplx prod{1.0, 0.0};
                for (int l = 0; l < c.point.n; ++l)
                    if (l != j) prod *= zp - std::pow(c.point.lambda[l], c.point.m);
                closed += double(c.point.m) * c.point.phi[j] * c.point.lambda[j] *
                          std::pow(z, c.point.m - 2) * prod;
            }
            CHECK(rel(D_eval(quad, z), closed) <= 1e-8);
        }
    }
}

TEST_CASE("bundle structure") {
    {
        const Coupling c = coupling_of({cplx{1, 0}});
        const SpectralPoint pt = make_point(1, {cplx{2, 0}}, {cplx{3, 0}});
        const SpectralFnBundle b = bundle(pt, c);
        CHECK(b.D.degree() == 0);
        CHECK(cdist(b.D.coeff(0), cplx{3, 0}) < 1e-10);
        CHECK(b.A.degree() == 1);
    }
    SampleRng rng(60);
    for (int rep = 0; rep < 12; ++rep) {
        const RandomCase c = draw_case(rng, 4, 4, 3);
        const SpectralFnBundle b = bundle(c.point, c.coupling, c.framing);
        const int m = c.point.m, n = c.point.n;
        CHECK(b.A.degree() == m * n);
        CHECK(cdist(b.A.leading(), cplx{1, 0}) < 1e-12);
        CHECK(b.D.degree() <= std::max(m * n - 2, 0));
        CHECK(b.C.degree() <= std::max(m * n - 2, 0));

        // spin form of D: coefficients of
        //   sum_j m phi_j lambda_j^{1 mod m} z^{(m-2) mod m} prod_{l != j} (z^m - lambda_l^m)
        // (the lambda factor drops to lambda^0 at m = 1 by the mod-m exponent rule)
        std::vector<cplx> lam_pow(n);
        for (int j = 0; j < n; ++j) lam_pow[j] = std::pow(c.point.lambda[j], m);
        const DensePoly master = DensePoly::from_roots(lam_pow);
        std::vector<cplx> in_a(n);
        for (int j = 0; j < n; ++j) {
            const DensePoly basis = master.deflate(lam_pow[j]);
            const cplx lam_factor = (m == 1) ? cplx{1, 0} : c.point.lambda[j];
            for (int k = 0; k < n; ++k)
                in_a[k] += double(m) * c.point.phi[j] * lam_factor * basis.coeff(k);
        }
        const double scale = std::max(b.D.max_abs_coeff(), 1.0);
        for (int k = 0; k <= b.D.degree(); ++k) {
            if (m >= 2 && mod_m(k - (m - 2), m) != 0) {
                CHECK(std::abs(b.D.coeff(k)) <= 1e-8 * scale);  // residue-class structure
            }
        }
        for (int k = 0; k < n; ++k) {
            const int idx = (m >= 2 ? m - 2 : 0) + m * k;
            CHECK(cdist(b.D.coeff(idx), in_a[static_cast<std::size_t>(k)]) <= 1e-8 * scale);
        }

        // A'(lambda_k) = m lambda_k^{m-1} prod_{l != k}(lambda_k^m - lambda_l^m)
        for (int k = 0; k < n; ++k) {
            cplx prod{1.0, 0.0};
            for (int l = 0; l < n; ++l)
                if (l != k) prod *= lam_pow[k] - lam_pow[l];
            const cplx want = double(m) * std::pow(c.point.lambda[k], m - 1) * prod;
            CHECK(rel(b.A_prime.eval(c.point.lambda[k]), want) <= 1e-9);
        }
    }
}

TEST_CASE("classic m=1 spectral Lax") {
    {
        QModelPoint qp;
        qp.m = 1;
        qp.n = 1;
        qp.p = {cplx{1.5, 0}};
        qp.q = {cplx{0.7, 0}};
        const ClassicCurve curve = classic_curve(qp, cplx{1, 0});
        CHECK(curve.P0.degree() == 1);
        CHECK(cdist(curve.P0.coeff(0), cplx{-1.5, 0}) < 1e-13);
        CHECK(curve.P1.degree() == 0);
        CHECK(cdist(curve.P1.coeff(0), cplx{1, 0}) < 1e-12);
    }
    SampleRng rng(70);
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 2);
        QModelPoint qp;
        qp.m = 1;
        qp.n = n;
        qp.q.resize(n);
        qp.p.resize(n);
        for (int j = 0; j < n; ++j) {
            qp.q[j] = cplx{double(j), 0} + 0.3 * rng.unit_disk();
            qp.p[j] = rng.unit_disk();
        }
        const cplx g{0.8, 0.2};
        const ClassicCurve curve = classic_curve(qp, g);
        const cplx ig = cplx{0, 1} * g;
        for (int t = 0; t < 5; ++t) {
            const cplx Lam = 2.5 * rng.unit_disk() + cplx{0.5, 0.5};
            const cplx z = rng.annulus(0.5, 2.0);
            const CMatrix Lz = classic_lax(qp, g, z);
            const cplx lhs = determinant(CMatrix::identity(n).scaled(Lam) - Lz);
            const cplx rhs = curve.P0.eval(Lam) - ig / z * curve.P1.eval(Lam);
            CHECK(cdist(lhs, rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
        }
        // trace route equals the bilinear route for P1
        const cplx Lam = cplx{2.0, 1.0};
        const CMatrix L0 = classic_lax(qp, g, cplx{1e12, 0});  // effectively L
        const CMatrix adj = adjugate(CMatrix::identity(n).scaled(Lam) - L0);
        CMatrix ones(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) ones.at(a, b) = 1.0;
        const cplx via_trace = (adj * ones).trace();
        CHECK(cdist(via_trace, curve.P1.eval(Lam)) <=
              1e-8 * std::max(1.0, std::abs(via_trace)));
    }
}
