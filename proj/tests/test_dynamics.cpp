#include "doctest.h"

#include <cmath>

#include "ccm/coords.hpp"
#include "ccm/dynamics.hpp"
#include "ccm/verify.hpp"
#include "test_support.hpp"

using namespace ccm;
using ccmtest::cdist;
using ccmtest::coupling_of;
using ccmtest::make_point;
using ccmtest::rel;

TEST_CASE("Hamiltonians") {
    {
        const Coupling c = coupling_of({cplx{1, 0}});
        const SpectralPoint pt = make_point(1, {cplx{2, 0}}, {cplx{0.3, 0}});
        CHECK(cdist(H_spectral(pt, 1), cplx{2, 0}) < 1e-14);
        CHECK(cdist(H_trace(build_dual(pt, c), 1), cplx{2, 0}) < 1e-13);
    }
    {
        const Coupling c = coupling_of({cplx{1, 0}, cplx{0.4, 0.2}});
        const SpectralPoint pt =
            make_point(2, {cplx{1, 0}, cplx{2, 0}}, {cplx{0.1, 0}, cplx{-0.3, 0.2}});
        CHECK(cdist(H_spectral(pt, 1), cplx{5, 0}) < 1e-13);  // 1 + 4
        const Quadruple quad = build_dual(pt, c);
        CHECK(cdist(H_trace(quad, 1), cplx{5, 0}) <= 1e-10);

        // trace invariance under conjugation
        SampleRng rng(31);
        CMatrix M = CMatrix::identity(quad.P.rows());
        for (std::size_t i = 0; i < M.rows(); ++i)
            for (std::size_t j = 0; j < M.cols(); ++j) M.at(i, j) += 0.1 * rng.unit_disk();
        CHECK(rel(H_trace(gauge(quad, M), 1), H_trace(quad, 1)) <= 1e-9);
    }
    SampleRng rng(32);
    for (int rep = 0; rep < 25; ++rep) {
        const RandomCase c = draw_case(rng, 4, 5, 3);
        const Quadruple quad = build_dual(c.point, c.coupling, c.framing);
        for (int K = 1; K <= std::min(3, c.point.n); ++K)
            CHECK(rel(H_trace(quad, K), H_spectral(c.point, K)) <= 1e-9);
    }
}

TEST_CASE("evolve") {
    const SpectralPoint pt = make_point(1, {cplx{2, 0}}, {cplx{0.5, 0}});
    const SpectralPoint still = evolve(pt, {1, cplx{0, 0}, 1});
    CHECK(cdist(still.phi[0], pt.phi[0]) == 0.0);

    // m=1, K=2, t=1: the shift is m^2 lambda^{mK-1} t = 2
    const SpectralPoint moved = evolve(pt, {2, cplx{1, 0}, 1});
    CHECK(cdist(moved.phi[0] - pt.phi[0], cplx{2, 0}) < 1e-14);
    CHECK(cdist(moved.lambda[0], pt.lambda[0]) == 0.0);

    // every H_K is conserved along any flow
    SampleRng rng(33);
    for (int rep = 0; rep < 10; ++rep) {
        const RandomCase c = draw_case(rng, 3, 4, 2);
        const int kflow = 1 + static_cast<int>(rng.next_u64() % std::uint64_t(c.point.n));
        const SpectralPoint at = evolve(c.point, {kflow, cplx{0.7, 0.4}, 1});
        const Quadruple rebuilt = build_dual(at, c.coupling, c.framing);
        for (int K = 1; K <= std::min(3, c.point.n); ++K) {
            CHECK(rel(H_spectral(at, K), H_spectral(c.point, K)) <= 1e-12);
            CHECK(rel(H_trace(rebuilt, K), H_spectral(c.point, K)) <= 1e-8);
        }
    }
}

TEST_CASE("positions") {
    {
        // m=1: build from a q-model point and recover the q's
        const Coupling c = coupling_of({cplx{1, 0}});
        QModelPoint qp;
        qp.m = 1;
        qp.n = 3;
        qp.q = {cplx{-1.1, 0.2}, cplx{0.4, -0.1}, cplx{1.3, 0.05}};
        qp.p = {cplx{0.2, 0}, cplx{-0.4, 0.1}, cplx{0.1, 0.3}};
        const Quadruple quad = build_qmodel(qp, c);
        const OrbitCoordinates rec = recover_spectral(quad, c);
        const std::vector<cplx> pos = positions(rec.point, c);
        CHECK(multiset_distance(pos, qp.q) <= 1e-8);
    }
    {
        // m=2, n=1: the block product is the product of the two 1x1 blocks
        const Coupling c = coupling_of({cplx{1, 0}, cplx{0.5, 0}});
        const SpectralPoint pt = make_point(2, {cplx{1.2, 0.1}}, {cplx{0.3, -0.2}});
        const Quadruple quad = build_dual(pt, c);
        const cplx direct = quad.X.at(1, 0) * quad.X.at(0, 1);
        const std::vector<cplx> pos = positions(pt, c);
        CHECK(cdist(pos[0], direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
    }
    {
        // gauge invariance via the compressed char poly route
        SampleRng rng(34);
        const RandomCase c = draw_case(rng, 3, 3, 2);
        const Quadruple quad = build_dual(c.point, c.coupling, c.framing);
        CMatrix M = CMatrix::identity(quad.X.rows());
        for (std::size_t i = 0; i < M.rows(); ++i)
            for (std::size_t j = 0; j < M.cols(); ++j) M.at(i, j) += 0.1 * rng.unit_disk();
        const std::vector<cplx> a = position_spectrum(quad);
        const std::vector<cplx> b = position_spectrum(gauge(quad, M));
        CHECK(multiset_distance(a, b) <= 1e-8);
        // and it agrees with the block-product route
        CHECK(multiset_distance(a, positions(c.point, c.coupling, c.framing)) <= 1e-8);
    }
}

TEST_CASE("integrate_eom") {
    {
        // free motion is exact under RK4
        QModelPoint qp;
        qp.m = 1;
        qp.n = 1;
        qp.q = {cplx{0.3, 0}};
        qp.p = {cplx{1.7, 0}};
        const QModelPoint out = integrate_eom(qp, cplx{0, 0}, cplx{2, 0}, 10);
        CHECK(cdist(out.q[0], cplx{0.3 + 2.0 * 1.7, 0}) < 1e-13);
        CHECK(cdist(out.p[0], qp.p[0]) < 1e-14);
    }
    {
        // energy drift over t=1 with n=3 random real data
        SampleRng rng(35);
        QModelPoint qp;
        qp.m = 1;
        qp.n = 3;
        qp.q = {cplx{-1.2, 0}, cplx{0.1, 0}, cplx{1.4, 0}};
        qp.p.resize(3);
        for (auto& p : qp.p) p = cplx{rng.uniform(-0.5, 0.5), 0};
        const cplx gamma{-1.0, 0.0};
        auto energy = [&](const QModelPoint& s) {
            cplx h{};
            for (int j = 0; j < 3; ++j) h += 0.5 * s.p[j] * s.p[j];
            for (int j = 0; j < 3; ++j)
                for (int k = j + 1; k < 3; ++k)
                    h += gamma / ((s.q[j] - s.q[k]) * (s.q[j] - s.q[k]));
            return h;
        };
        const QModelPoint out = integrate_eom(qp, gamma, cplx{1, 0}, 10000);
        CHECK(rel(energy(out), energy(qp)) <= 1e-8);
    }
    {
        // collision guard
        QModelPoint qp;
        qp.m = 1;
        qp.n = 2;
        qp.q = {cplx{-1e-8, 0}, cplx{1e-8, 0}};
        qp.p = {cplx{0, 0}, cplx{0, 0}};
        CHECK_THROWS_AS(integrate_eom(qp, cplx{-1.0, 0}, cplx{1, 0}, 10), CollisionDetected);
    }
}

TEST_CASE("m=1 projection matches the ODE flow") {
    SampleRng rng(36);
    for (int rep = 0; rep < 3; ++rep) {
        const int n = 2 + rep % 2;
        const Coupling coupling = coupling_of({cplx{1, 0}});
        QModelPoint qp;
        qp.m = 1;
        qp.n = n;
        qp.q.resize(n);
        qp.p.resize(n);
        for (int j = 0; j < n; ++j) {
            qp.q[j] = cplx{-1.5 + 3.0 * j / std::max(1, n - 1), 0.0} + 0.2 * rng.unit_disk();
            qp.p[j] = 0.5 * rng.unit_disk();
        }
        const Quadruple quad = build_qmodel(qp, coupling);
        const OrbitCoordinates rec = recover_spectral(quad, coupling);
        const cplx gamma = -coupling.abs_g * coupling.abs_g;
        for (const double t : {0.1, 0.5, 1.0}) {
            const SpectralPoint moved = evolve(rec.point, {2, cplx{t, 0}, 1});
            const std::vector<cplx> via_spec = positions(moved, coupling);
            const QModelPoint ode = integrate_eom(qp, gamma, cplx{t, 0}, 4000);
            CHECK(multiset_distance(via_spec, ode.q) <= 1e-6);
        }
    }
}
