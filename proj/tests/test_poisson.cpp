#include "doctest.h"

#include <cmath>

#include "ccm/poisson.hpp"
#include "ccm/verify.hpp"
#include "test_support.hpp"

using namespace ccm;
using ccmtest::cdist;
using ccmtest::coupling_of;
using ccmtest::make_point;

namespace {

PhaseState spin_state(SampleRng& rng, int m, int n, int d, Coupling& coupling_out) {
    const RandomCase c = draw_case(rng, m, n, d);
    coupling_out = c.coupling;
    return {c.point, c.framing};
}

} // namespace

TEST_CASE("fd_partial") {
    const SpectralPoint pt = make_point(1, {cplx{3, 0}}, {cplx{0, 0}});
    const PhaseState state{pt, std::nullopt};

    const PhaseFunction sq{[](const PhaseState& s) { return s.point.lambda[0] * s.point.lambda[0]; },
                           "lambda^2"};
    CHECK(cdist(fd_partial(sq, {CoordinateId::Kind::lambda, 0}, state), cplx{6, 0}) < 1e-7);

    const PhaseFunction constant{[](const PhaseState&) { return cplx{4, 2}; }, "const"};
    CHECK(std::abs(fd_partial(constant, {CoordinateId::Kind::lambda, 0}, state)) < 1e-9);

    // holomorphy: the imaginary-direction estimate matches the real one
    const PhaseFunction cube{[](const PhaseState& s) {
                                 const cplx l = s.point.lambda[0];
                                 return l * l * l;
                             },
                             "lambda^3"};
    FdConfig imag;
    imag.imaginary_direction = true;
    const cplx re_dir = fd_partial(cube, {CoordinateId::Kind::lambda, 0}, state);
    const cplx im_dir = fd_partial(cube, {CoordinateId::Kind::lambda, 0}, state, imag);
    CHECK(cdist(re_dir, im_dir) <= 1e-5);
}

TEST_CASE("bracket canonical pairs") {
    SampleRng rng(11);
    Coupling coupling;
    const PhaseState state = spin_state(rng, 3, 3, 2, coupling);
    const int n = state.point.n;

    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const PhaseFunction lam{[j](const PhaseState& s) { return s.point.lambda[j]; }, "lam"};
            const PhaseFunction lam2{[k](const PhaseState& s) { return s.point.lambda[k]; }, "lam"};
            const PhaseFunction phim{[k, &state](const PhaseState& s) {
                                         return s.point.phi[k] / double(s.point.m);
                                     },
                                     "phi/m"};
            const cplx lp = bracket(lam, phim, state);
            const cplx ll = bracket(lam, lam2, state);
            CHECK(cdist(lp, j == k ? cplx{1, 0} : cplx{}) <= 1e-6);
            CHECK(std::abs(ll) <= 1e-8);
        }
    }

    // spin block pairing {W_i[a,j], V_i'[k,b]} = delta delta delta
    if (state.framing) {
        const int d = state.framing->d;
        const int m = state.point.m;
        for (int i = 0; i < std::min(2, m); ++i)
            for (int i2 = 0; i2 < std::min(2, m); ++i2) {
                const PhaseFunction wf{[i](const PhaseState& s) {
                                           return s.framing->W[i].at(0, 0);
                                       },
                                       "w"};
                const PhaseFunction vf{[i2, d](const PhaseState& s) {
                                           return s.framing->V[i2].at(0, d - 1);
                                       },
                                       "v"};
                const cplx br = bracket(wf, vf, state);
                const cplx want = (i == i2 && d == 1) ? cplx{1, 0} : cplx{};
                CHECK(cdist(br, want) <= 1e-6);
            }
    }
}

TEST_CASE("bracket antisymmetry") {
    SampleRng rng(12);
    Coupling coupling;
    const PhaseState state = spin_state(rng, 2, 2, 1, coupling);
    const PhaseFunction f{[](const PhaseState& s) {
                              return s.point.lambda[0] * s.point.phi[0];
                          },
                          "f"};
    const PhaseFunction g{[](const PhaseState& s) {
                              return s.point.lambda[0] + s.point.phi[0] * s.point.phi[0];
                          },
                          "g"};
    const cplx fg = bracket(f, g, state);
    const cplx gf = bracket(g, f, state);
    CHECK(std::abs(fg + gf) <= 1e-9 * std::max(1.0, std::abs(fg)));
}

TEST_CASE("verify_conjugacy") {
    {
        // n=1: {theta_1, theta_1} = 0 by antisymmetry
        SampleRng rng(13);
        Coupling coupling;
        const PhaseState state = spin_state(rng, 2, 1, 1, coupling);
        const ConjugacyReport rep = verify_conjugacy(state, coupling);
        CHECK(rep.max_theta_theta <= 1e-9);
        CHECK(rep.max_lambda_theta <= 1e-6);
    }
    for (int rep_i = 0; rep_i < 15; ++rep_i) {
        SampleRng rng(1300 + rep_i);
        const RandomCase c = draw_case(rng, 3, 4, 2);
        const ConjugacyReport rep = verify_conjugacy({c.point, c.framing}, c.coupling);
        CHECK(rep.max_lambda_theta <= 1e-5);
        CHECK(rep.max_theta_theta <= 1e-5);
    }
}

TEST_CASE("verify_partial_identities") {
    for (int rep_i = 0; rep_i < 10; ++rep_i) {
        SampleRng rng(1400 + rep_i);
        const RandomCase c = draw_case(rng, 3, 4, 2);
        SampleRng id_rng(900 + rep_i);
        const PartialIdentityReport rep =
            verify_partial_identities({c.point, c.framing}, c.coupling, id_rng);
        CHECK(rep.fk_symmetry <= 1e-6);
        CHECK(rep.key_identity <= 1e-7);
        if (c.framing) {
            CHECK(rep.e_partials <= 1e-5);
            CHECK(rep.f_partials <= 1e-5);
        }
    }
}
