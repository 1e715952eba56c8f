#include "ccm/poisson.hpp"

#include <cmath>

namespace ccm {

int coordinate_count(const PhaseState& state) {
    int count = 2 * state.point.n;
    if (state.framing) count += 2 * state.point.m * state.point.n * state.framing->d;
    return count;
}

CoordinateId coordinate_at(const PhaseState& state, int flat_index) {
    const int n = state.point.n;
    if (flat_index < n) return {CoordinateId::Kind::lambda, flat_index};
    flat_index -= n;
    if (flat_index < n) return {CoordinateId::Kind::phi, flat_index};
    flat_index -= n;
    const int d = state.framing->d;
    const int per_block = n * d;
    const int m = state.point.m;
    if (flat_index < m * per_block) {
        const int block = flat_index / per_block;
        const int rem = flat_index % per_block;
        return {CoordinateId::Kind::framing_v, rem / d, block, rem % d};
    }
    flat_index -= m * per_block;
    const int block = flat_index / per_block;
    const int rem = flat_index % per_block;
    return {CoordinateId::Kind::framing_w, rem % n, block, rem / n};
}

cplx coordinate_value(const PhaseState& state, const CoordinateId& id) {
    switch (id.kind) {
        case CoordinateId::Kind::lambda: return state.point.lambda[id.j];
        case CoordinateId::Kind::phi: return state.point.phi[id.j];
        case CoordinateId::Kind::framing_v: return state.framing->V[id.block].at(id.j, id.alpha);
        case CoordinateId::Kind::framing_w: return state.framing->W[id.block].at(id.alpha, id.j);
    }
    return {};
}

PhaseState with_offset(const PhaseState& state, const CoordinateId& id, cplx delta) {
    PhaseState s = state;
    switch (id.kind) {
        case CoordinateId::Kind::lambda: s.point.lambda[id.j] += delta; break;
        case CoordinateId::Kind::phi: s.point.phi[id.j] += delta; break;
        case CoordinateId::Kind::framing_v: s.framing->V[id.block].at(id.j, id.alpha) += delta; break;
        case CoordinateId::Kind::framing_w: s.framing->W[id.block].at(id.alpha, id.j) += delta; break;
    }
    return s;
}

cplx fd_partial(const PhaseFunction& f, const CoordinateId& id, const PhaseState& state,
                const FdConfig& cfg) {
    const double h = cfg.step_rel * (1.0 + std::abs(coordinate_value(state, id)));
    const cplx dir = cfg.imaginary_direction ? cplx{0.0, h} : cplx{h, 0.0};
    cplx hi, lo;
    try {
        hi = f.eval(with_offset(state, id, dir));
        lo = f.eval(with_offset(state, id, -dir));
    } catch (const std::exception& e) {
        throw EvaluationFailure(std::string("fd_partial: ") + f.label + ": " + e.what());
    }
    if (!std::isfinite(hi.real()) || !std::isfinite(hi.imag()) ||
        !std::isfinite(lo.real()) || !std::isfinite(lo.imag()))
        throw EvaluationFailure("fd_partial: non-finite evaluation of " + f.label);
    return (hi - lo) / (2.0 * dir);
}

std::vector<cplx> fd_gradient(const PhaseFunction& f, const PhaseState& state,
                              const FdConfig& cfg) {
    const int count = coordinate_count(state);
    std::vector<cplx> grad(count);
    for (int k = 0; k < count; ++k) grad[k] = fd_partial(f, coordinate_at(state, k), state, cfg);
    return grad;
}

cplx bracket_from_gradients(const PhaseState& state, const std::vector<cplx>& gf,
                            const std::vector<cplx>& gg) {
    const int n = state.point.n;
    const double m = state.point.m;
    cplx acc{};
    for (int j = 0; j < n; ++j) acc += m * (gf[j] * gg[n + j] - gf[n + j] * gg[j]);
    if (state.framing) {
        const int d = state.framing->d;
        const int mm = state.point.m;
        const int v_base = 2 * n;
        const int w_base = 2 * n + mm * n * d;
        for (int i = 0; i < mm; ++i)
            for (int j = 0; j < n; ++j)
                for (int a = 0; a < d; ++a) {
                    const int iv = v_base + i * n * d + j * d + a;
                    const int iw = w_base + i * n * d + a * n + j;
                    acc += gf[iw] * gg[iv] - gf[iv] * gg[iw];
                }
    }
    return acc;
}

cplx bracket(const PhaseFunction& f, const PhaseFunction& g, const PhaseState& state,
             const FdConfig& cfg) {
    return bracket_from_gradients(state, fd_gradient(f, state, cfg), fd_gradient(g, state, cfg));
}

ConjugacyReport verify_conjugacy(const PhaseState& state, const Coupling& coupling,
                                 const FdConfig& cfg) {
    const int n = state.point.n;
    std::vector<std::vector<cplx>> theta_grads(n);
    for (int k = 0; k < n; ++k) {
        PhaseFunction th{[&coupling, k](const PhaseState& s) {
                             return theta_closed(s.point, coupling, s.framing)[k];
                         },
                         "theta_" + std::to_string(k)};
        theta_grads[k] = fd_gradient(th, state, cfg);
    }
    const int count = coordinate_count(state);
    ConjugacyReport rep;
    for (int j = 0; j < n; ++j) {
        std::vector<cplx> lam_grad(count);
        lam_grad[j] = 1.0;  // lambda_j is a coordinate; its gradient is exact
        for (int k = 0; k < n; ++k) {
            const cplx br = bracket_from_gradients(state, lam_grad, theta_grads[k]);
            const cplx expect = (j == k) ? cplx{1.0, 0.0} : cplx{};
            rep.max_lambda_theta = std::max(rep.max_lambda_theta, std::abs(br - expect));
        }
    }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const cplx br = bracket_from_gradients(state, theta_grads[j], theta_grads[k]);
            rep.max_theta_theta = std::max(rep.max_theta_theta, std::abs(br));
        }
    return rep;
}

namespace {

// Spinless interaction part of theta: f_k as a standalone function of lambda.
cplx spinless_fk(const SpectralPoint& pt, const Coupling& coupling, int k) {
    const int m = pt.m, n = pt.n;
    const cplx lk = pt.lambda[k];
    const cplx lkp = std::pow(lk, m);
    cplx f = coupling.c[m - 1] / (double(m) * lk);
    for (int l = 0; l < n; ++l) {
        if (l == k) continue;
        f += coupling.abs_g / (double(m) * lk) * lkp / (lkp - std::pow(pt.lambda[l], m));
    }
    return f;
}

// Printed closed form of the spin e_k (the variant whose on-surface partial
// derivatives have the simple analytic expressions below).
cplx printed_ek(const PhaseState& s, const Coupling& coupling, int k) {
    const int m = s.point.m;
    const SpinFraming& fr = *s.framing;
    std::vector<CMatrix> vw;
    for (int i = 0; i < m; ++i) vw.push_back(fr.V[i] * fr.W[i]);
    cplx weighted{};
    for (int t = 0; t < m; ++t) weighted += (double(m - t) / m) * vw[t].at(k, k);
    cplx e{};
    for (int i = 0; i < m; ++i) {
        cplx inner = coupling.c[mod_m(i - 1, m)] - weighted;
        for (int r = 0; r < i; ++r) inner += vw[r].at(k, k);
        e += vw[i].at(k, k) * inner;
    }
    return e / (double(m) * coupling.abs_g * s.point.lambda[k]);
}

cplx spin_fk(const PhaseState& s, const Coupling& coupling, int k) {
    const int m = s.point.m, n = s.point.n;
    const SpinFraming& fr = *s.framing;
    std::vector<CMatrix> vw;
    for (int i = 0; i < m; ++i) vw.push_back(fr.V[i] * fr.W[i]);
    std::vector<cplx> lam_pow(n);
    for (int j = 0; j < n; ++j) lam_pow[j] = std::pow(s.point.lambda[j], m);
    cplx f{};
    for (int h = 0; h < m; ++h)
        for (int i = 0; i < m; ++i)
            for (int t = 0; t < n; ++t) {
                if (t == k) continue;
                f += vw[i].at(k, t) * vw[mod_m(i - h - 1, m)].at(t, k) *
                     std::pow(s.point.lambda[t], m - h - 1) * std::pow(s.point.lambda[k], h) /
                     (lam_pow[t] - lam_pow[k]);
            }
    return -f / (double(m) * coupling.abs_g);
}

double rel_err(cplx got, cplx want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

} // namespace

PartialIdentityReport verify_partial_identities(const PhaseState& state, const Coupling& coupling,
                                                SampleRng& rng, const FdConfig& cfg) {
    PartialIdentityReport rep;
    const int m = state.point.m, n = state.point.n;

    // d f_j / d lambda_k symmetry for the spinless interaction functions
    {
        PhaseState spinless = state;
        spinless.framing.reset();
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                PhaseFunction fj{[&coupling, j](const PhaseState& s) {
                                     return spinless_fk(s.point, coupling, j);
                                 },
                                 "f_j"};
                PhaseFunction fk{[&coupling, k](const PhaseState& s) {
                                     return spinless_fk(s.point, coupling, k);
                                 },
                                 "f_k"};
                const cplx djk = fd_partial(fj, {CoordinateId::Kind::lambda, k}, spinless, cfg);
                const cplx dkj = fd_partial(fk, {CoordinateId::Kind::lambda, j}, spinless, cfg);
                rep.fk_symmetry = std::max(rep.fk_symmetry, std::abs(djk - dkj));
            }
    }

    // scalar derivative identity behind the symmetry of the spin f-sums:
    //   d/dlk [lk^{m-h-1} lj^h / (lk^m - lj^m)] = d/dlj [lj^{h+1} lk^{m-h-2} / (lj^m - lk^m)]
    for (int trial = 0; trial < 20; ++trial) {
        const cplx lj = rng.annulus(0.6, 1.8);
        cplx lk = rng.annulus(0.6, 1.8);
        // a healthy lambda^m separation keeps the FD truncation error of the
        // (lambda^m - lambda^m)^{-1} factors inside the 1e-7 budget
        while (std::abs(std::pow(lk, m) - std::pow(lj, m)) < 0.8)
            lk = rng.annulus(0.6, 1.8);
        const int h = static_cast<int>(rng.uniform(0.0, double(m))) % m;
        auto lhs_fn = [&](cplx lkv) {
            return std::pow(lkv, m - h - 1) * std::pow(lj, h) /
                   (std::pow(lkv, m) - std::pow(lj, m));
        };
        auto rhs_fn = [&](cplx ljv) {
            return std::pow(ljv, h + 1) * std::pow(lk, double(m - h - 2)) /
                   (std::pow(ljv, m) - std::pow(lk, m));
        };
        // the third derivative of these rational factors is large, so this
        // check runs with a tenth of the usual step
        const double hk = 0.1 * cfg.step_rel * (1.0 + std::abs(lk));
        const double hj = 0.1 * cfg.step_rel * (1.0 + std::abs(lj));
        const cplx lhs = (lhs_fn(lk + hk) - lhs_fn(lk - hk)) / (2.0 * hk);
        const cplx rhs = (rhs_fn(lj + hj) - rhs_fn(lj - hj)) / (2.0 * hj);
        rep.key_identity = std::max(rep.key_identity, std::abs(lhs - rhs));
    }

    if (!state.framing) return rep;
    const SpinFraming& fr = *state.framing;
    const int d = fr.d;
    std::vector<CMatrix> vw;
    for (int i = 0; i < m; ++i) vw.push_back(fr.V[i] * fr.W[i]);
    const cplx mg = double(m) * coupling.abs_g;

    for (int j = 0; j < n; ++j) {
        PhaseFunction ej{[&coupling, j](const PhaseState& s) { return printed_ek(s, coupling, j); },
                         "e_j"};
        cplx weighted{};
        for (int s = 0; s < m; ++s) weighted += (double(m - s) / m) * vw[s].at(j, j);
        for (int i = 0; i < m; ++i) {
            const cplx common =
                coupling.c[mod_m(i - 1, m)] + (double(i) / m) * coupling.abs_g -
                vw[i].at(j, j) - weighted;
            for (int a = 0; a < d; ++a) {
                const cplx fd_w =
                    fd_partial(ej, {CoordinateId::Kind::framing_w, j, i, a}, state, cfg);
                const cplx an_w = fr.V[i].at(j, a) / (mg * state.point.lambda[j]) * common;
                rep.e_partials = std::max(rep.e_partials, rel_err(fd_w, an_w));

                const cplx fd_v =
                    fd_partial(ej, {CoordinateId::Kind::framing_v, j, i, a}, state, cfg);
                const cplx an_v = fr.W[i].at(a, j) / (mg * state.point.lambda[j]) * common;
                rep.e_partials = std::max(rep.e_partials, rel_err(fd_v, an_v));
            }
        }
    }

    std::vector<cplx> lam_pow(n);
    for (int j = 0; j < n; ++j) lam_pow[j] = std::pow(state.point.lambda[j], m);
    for (int k = 0; k < n; ++k) {
        PhaseFunction fk{[&coupling, k](const PhaseState& s) { return spin_fk(s, coupling, k); },
                         "f_k"};
        for (int j = 0; j < n; ++j) {
            if (j == k) continue;
            for (int i = 0; i < m; ++i) {
                cplx sum_w{}, sum_v{};
                for (int h = 0; h < m; ++h) {
                    const cplx weight = std::pow(state.point.lambda[j], m - h - 1) *
                                        std::pow(state.point.lambda[k], h) /
                                        (lam_pow[j] - lam_pow[k]);
                    sum_w += vw[mod_m(i - h - 1, m)].at(j, k) * weight;
                    sum_v += vw[mod_m(i + h + 1, m)].at(k, j) * weight;
                }
                for (int a = 0; a < d; ++a) {
                    const cplx fd_w =
                        fd_partial(fk, {CoordinateId::Kind::framing_w, j, i, a}, state, cfg);
                    const cplx an_w = -fr.V[i].at(k, a) / mg * sum_w;
                    rep.f_partials = std::max(rep.f_partials, rel_err(fd_w, an_w));

                    const cplx fd_v =
                        fd_partial(fk, {CoordinateId::Kind::framing_v, j, i, a}, state, cfg);
                    const cplx an_v = -fr.W[i].at(a, k) / mg * sum_v;
                    rep.f_partials = std::max(rep.f_partials, rel_err(fd_v, an_v));
                }
            }
        }
    }
    return rep;
}

} // namespace ccm
