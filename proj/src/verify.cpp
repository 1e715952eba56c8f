#include "ccm/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "ccm/coords.hpp"
#include "ccm/curves.hpp"
#include "ccm/dynamics.hpp"
#include "ccm/poisson.hpp"
#include "ccm/spectral.hpp"

namespace ccm {

namespace {

constexpr double kSuiteLambdaPowGap = 0.15;  // keeps A'(lambda_k) away from zero

SampleRng case_rng(const VerifyOptions& opt, const char* suite, int index) {
    std::uint64_t h = opt.seed;
    for (const char* c = suite; *c; ++c) h = h * 1099511628211ull + std::uint64_t(*c);
    h = h * 1099511628211ull + std::uint64_t(index) + 1;
    return SampleRng(h);
}

Coupling draw_regular_coupling(SampleRng& rng, int m) {
    for (int tries = 0; tries < 200; ++tries) {
        std::vector<cplx> g(m);
        for (cplx& x : g) x = rng.unit_disk() + cplx{0.15, 0.1};
        Coupling c = derived_constants(m, g);
        if (std::abs(c.abs_g) < 0.3) continue;
        if (is_regular(c).regular) return c;
    }
    throw SamplingFailed("draw_regular_coupling: no regular coupling found");
}

cplx draw_offspectrum_z(SampleRng& rng, const SpectralPoint& pt) {
    double lam_max = 0.0;
    for (const cplx& l : pt.lambda) lam_max = std::max(lam_max, std::abs(l));
    for (int tries = 0; tries < 200; ++tries) {
        const cplx z = rng.annulus(0.6 * lam_max, 1.9 * lam_max);
        const cplx zp = std::pow(z, pt.m);
        bool ok = std::abs(z) > 0.05;
        double scale = std::abs(zp);
        for (const cplx& l : pt.lambda) scale = std::max(scale, std::abs(std::pow(l, pt.m)));
        for (const cplx& l : pt.lambda)
            if (std::abs(zp - std::pow(l, pt.m)) < 0.1 * std::max(scale, 1.0)) ok = false;
        if (ok) return z;
    }
    throw SamplingFailed("draw_offspectrum_z: rejection failed");
}

} // namespace

CMatrix random_block_gauge(SampleRng& rng, int m, int n) {
    CMatrix M(static_cast<std::size_t>(m) * n, static_cast<std::size_t>(m) * n);
    for (int b = 0; b < m; ++b) {
        for (int i = 0; i < n; ++i) {
            M.at(b * n + i, b * n + i) = cplx{rng.uniform(0.7, 1.5), rng.uniform(-0.2, 0.2)};
            for (int j = 0; j < n; ++j)
                if (j != i) M.at(b * n + i, b * n + j) = 0.25 / n * rng.unit_disk();
        }
    }
    return M;
}

namespace {

double rel_to(double delta, double scale) { return delta / std::max(1.0, scale); }

std::string fmt_e(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

using SuiteFn = std::function<SuiteResult(const VerifyOptions&)>;

SuiteResult make_result(std::string name, int cases, double worst, double tol, std::string note = {}) {
    SuiteResult r;
    r.name = std::move(name);
    r.cases = cases;
    r.max_residual = worst;
    r.tolerance = tol;
    r.pass = worst <= tol;
    r.note = std::move(note);
    return r;
}

SuiteResult suite_lemma1(const VerifyOptions& opt) {
    double worst = 0.0;
    for (int i = 0; i < opt.cases; ++i) {
        SampleRng rng = case_rng(opt, "lemma1", i);
        RandomCase c = draw_case(rng, 4, 5, 3);
        const Quadruple quad = build_dual(c.point, c.coupling, c.framing);
        for (int t = 0; t < 10; ++t) {
            const cplx z = draw_offspectrum_z(rng, c.point);
            const cplx closed = A_closed(c.point, z);
            const CMatrix M = CMatrix::identity(quad.P.rows()).scaled(z) - quad.P;
            worst = std::max(worst, std::abs(determinant(M) - closed) / std::abs(closed));
        }
    }
    return make_result("lemma1", opt.cases, worst, opt.tol.lemma1);
}

SuiteResult suite_lemma2(const VerifyOptions& opt) {
    double worst_id = 0.0, worst_lu = 0.0;
    for (int i = 0; i < opt.cases; ++i) {
        SampleRng rng = case_rng(opt, "lemma2", i);
        RandomCase c = draw_case(rng, 4, 5, 3);
        const Quadruple quad = build_dual(c.point, c.coupling, c.framing);
        const std::size_t N = quad.P.rows();
        for (int t = 0; t < 5; ++t) {
            const cplx z = draw_offspectrum_z(rng, c.point);
            const CMatrix R = resolvent_closed(c.point, z);
            const CMatrix M = CMatrix::identity(N).scaled(z) - quad.P;
            worst_id = std::max(worst_id, (M * R - CMatrix::identity(N)).max_norm());
            worst_lu = std::max(worst_lu, (R - lu_solve(M, CMatrix::identity(N))).max_norm());
        }
    }
    SuiteResult r = make_result("lemma2", opt.cases, worst_id, opt.tol.lemma2_identity);
    r.pass = r.pass && worst_lu <= opt.tol.lemma2_lu;
    r.note = "lu agreement " + fmt_e(worst_lu);
    return r;
}

SuiteResult suite_constraint(const VerifyOptions& opt) {
    double worst = 0.0;
    double control_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < opt.cases; ++i) {
        SampleRng rng = case_rng(opt, "constraint", i);
        RandomCase c = draw_case(rng, 4, 5, 3);
        const Quadruple quad = build_dual(c.point, c.coupling, c.framing);
        worst = std::max(worst, moment_residual(quad, c.coupling));
        if (c.framing) {
            worst = std::max(worst, framing_constraint_residual(*c.framing, c.coupling));
            worst = std::max(worst,
                             spin_sum_identity_residual(c.point, c.coupling, *c.framing));
        }
        // negative control: flipping the framing sign must leave the surface
        const double bound =
            std::abs(c.coupling.abs_g) * std::sqrt(double(c.point.n)) / 2.0;
        control_margin = std::min(control_margin,
                                  moment_residual(quad, c.coupling, true) - bound);

        // q-model representative
        const int m = c.coupling.m;
        QModelPoint qp;
        qp.m = m;
        qp.n = c.point.n;
        qp.q.resize(qp.n);
        qp.p.resize(qp.n);
        for (int j = 0; j < qp.n; ++j) qp.p[j] = rng.unit_disk();
        for (int j = 0; j < qp.n; ++j) {
            while (true) {
                const cplx cand = rng.annulus(0.5, 2.0);
                bool ok = true;
                for (int k = 0; k < j; ++k)
                    if (std::abs(std::pow(cand, m) - std::pow(qp.q[k], m)) < kSuiteLambdaPowGap)
                        ok = false;
                if (ok) { qp.q[j] = cand; break; }
            }
        }
        worst = std::max(worst, moment_residual(build_qmodel(qp, c.coupling), c.coupling));
    }
    SuiteResult r = make_result("constraint", opt.cases, worst, opt.tol.constraint);
    if (control_margin < 0.0) {
        r.pass = false;
        r.note = "negative control too small";
    } else {
        r.note = "negative-control margin " + fmt_e(control_margin);
    }
    return r;
}

// A'(lambda_k) as the exact product m lambda^{m-1} prod_{l != k} (lambda_k^m - lambda_l^m);
// the coefficient-form evaluation cancels catastrophically for clustered roots.
cplx aprime_at(const SpectralPoint& pt, int k) {
    cplx acc = double(pt.m) * std::pow(pt.lambda[k], pt.m - 1);
    for (int l = 0; l < pt.n; ++l)
        if (l != k) acc *= std::pow(pt.lambda[k], pt.m) - std::pow(pt.lambda[l], pt.m);
    return acc;
}

SuiteResult suite_thm1(const VerifyOptions& opt) {
    double worst = 0.0;
    for (int i = 0; i < opt.cases; ++i) {
        SampleRng rng = case_rng(opt, "thm1", i);
        RandomCase c = draw_case(rng, 4, 5, 3);
        // r(lambda_k) = D(lambda_k)/A'(lambda_k), both factors pointwise: the
        // cofactor adjugate keeps D finite on the spectrum and the product
        // form of A' is exact
        const Quadruple quad = build_dual(c.point, c.coupling, c.framing);
        for (int k = 0; k < c.point.n; ++k) {
            const cplx got = D_eval(quad, c.point.lambda[k]) / aprime_at(c.point, k);
            worst = std::max(worst, rel_to(std::abs(got - c.point.phi[k]),
                                           std::abs(c.point.phi[k])));
        }
    }
    return make_result("thm1", opt.cases, worst, opt.tol.thm1);
}

SuiteResult suite_thm2(const VerifyOptions& opt) {
    double worst = 0.0;
    for (int i = 0; i < opt.cases; ++i) {
        SampleRng rng = case_rng(opt, "thm2", i);
        RandomCase c = draw_case(rng, 4, 5, 3);
        const Quadruple quad = build_dual(c.point, c.coupling, c.framing);
        const std::vector<cplx> theta = theta_closed(c.point, c.coupling, c.framing);
        for (int k = 0; k < c.point.n; ++k) {
            const cplx got = C_eval(quad, c.point.lambda[k]) /
                             (c.coupling.abs_g * aprime_at(c.point, k));
            worst = std::max(worst, rel_to(std::abs(got - theta[k]), std::abs(theta[k])));
        }
    }
    return make_result("thm2", opt.cases, worst, opt.tol.thm2);
}

SuiteResult suite_brackets(const VerifyOptions& opt) {
    const int cases = std::min(opt.cases, opt.bracket_cases);
    double worst = 0.0;
    for (int i = 0; i < cases; ++i) {
        SampleRng rng = case_rng(opt, "brackets", i);
        RandomCase c = draw_case(rng, 3, 4, 2);
        const ConjugacyReport rep =
            verify_conjugacy({c.point, c.framing}, c.coupling);
        worst = std::max({worst, rep.max_lambda_theta, rep.max_theta_theta});
    }
    return make_result("brackets", cases, worst, opt.tol.bracket);
}

SuiteResult suite_partials(const VerifyOptions& opt) {
    const int cases = std::min(opt.cases, opt.bracket_cases);
    double worst_ratio = 0.0;
    double w16 = 0.0, wkey = 0.0, we = 0.0, wf = 0.0;
    for (int i = 0; i < cases; ++i) {
        SampleRng rng = case_rng(opt, "partials", i);
        RandomCase c = draw_case(rng, 3, 4, 2, /*force_spinless=*/i % 3 == 0);
        const PartialIdentityReport rep =
            verify_partial_identities({c.point, c.framing}, c.coupling, rng);
        w16 = std::max(w16, rep.fk_symmetry);
        wkey = std::max(wkey, rep.key_identity);
        we = std::max(we, rep.e_partials);
        wf = std::max(wf, rep.f_partials);
    }
    worst_ratio = std::max({w16 / opt.tol.eq16, wkey / opt.tol.key_identity,
                            we / opt.tol.spin_partials, wf / opt.tol.spin_partials});
    SuiteResult r;
    r.name = "partials";
    r.cases = cases;
    r.max_residual = worst_ratio;  // worst residual as a fraction of its own tolerance
    r.tolerance = 1.0;
    r.pass = worst_ratio <= 1.0;
    r.note = "eq16 " + fmt_e(w16) + ", key " + fmt_e(wkey) + ", e " + fmt_e(we) +
             ", f " + fmt_e(wf);
    return r;
}

SuiteResult suite_gauge(const VerifyOptions& opt) {
    double worst_acd = 0.0, worst_rec = 0.0;
    for (int i = 0; i < opt.cases; ++i) {
        SampleRng rng = case_rng(opt, "gauge", i);
        RandomCase c = draw_case(rng, 4, 5, 3);
        const Quadruple quad = build_dual(c.point, c.coupling, c.framing);
        const CMatrix M = random_block_gauge(rng, c.point.m, c.point.n);
        const Quadruple gq = gauge(quad, M);
        worst_acd = std::max(worst_acd, moment_residual(gq, c.coupling));
        for (int t = 0; t < 5; ++t) {
            const cplx z = draw_offspectrum_z(rng, c.point);
            const CMatrix M1 = CMatrix::identity(quad.P.rows()).scaled(z) - quad.P;
            const CMatrix M2 = CMatrix::identity(gq.P.rows()).scaled(z) - gq.P;
            worst_acd = std::max(worst_acd,
                                 std::abs(determinant(M1) - determinant(M2)) /
                                     std::abs(determinant(M1)));
            const cplx d1 = D_eval(quad, z), d2 = D_eval(gq, z);
            const cplx c1 = C_eval(quad, z), c2 = C_eval(gq, z);
            worst_acd = std::max(worst_acd, rel_to(std::abs(d1 - d2), std::abs(d1)));
            worst_acd = std::max(worst_acd, rel_to(std::abs(c1 - c2), std::abs(c1)));
        }
        if (i % 8 == 0) {  // spectral recovery is the slow half of this suite
            const OrbitCoordinates a = recover_spectral(quad, c.coupling);
            const OrbitCoordinates b = recover_spectral(gq, c.coupling);
            worst_rec = std::max(worst_rec, orbit_distance(a, b));
        }
    }
    SuiteResult r = make_result("gauge", opt.cases, worst_acd, opt.tol.gauge_acd);
    r.pass = r.pass && worst_rec <= opt.tol.gauge_recover;
    r.note = "recover distance " + fmt_e(worst_rec);
    return r;
}

SuiteResult suite_roundtrip(const VerifyOptions& opt) {
    double worst = 0.0;
    for (int i = 0; i < opt.cases; ++i) {
        SampleRng rng = case_rng(opt, "roundtrip", i);
        RandomCase c = draw_case(rng, 4, 5, 0, /*force_spinless=*/true);
        const Quadruple quad = build_dual(c.point, c.coupling, c.framing);
        const OrbitCoordinates rec = recover_spectral(quad, c.coupling);
        const OrbitCoordinates ref = canonicalize(c.point);
        worst = std::max(worst, orbit_distance(rec, ref));
    }
    return make_result("roundtrip", opt.cases, worst, opt.tol.roundtrip);
}

SuiteResult suite_hamiltonian(const VerifyOptions& opt) {
    double worst_eq = 0.0, worst_cons = 0.0, worst_cross = 0.0;
    for (int i = 0; i < opt.cases; ++i) {
        SampleRng rng = case_rng(opt, "hamiltonian", i);
        RandomCase c = draw_case(rng, 4, 5, 3);
        const Quadruple quad = build_dual(c.point, c.coupling, c.framing);
        const int kmax = std::min(3, c.point.n);
        for (int K = 1; K <= kmax; ++K) {
            const cplx ht = H_trace(quad, K);
            const cplx hs = H_spectral(c.point, K);
            worst_eq = std::max(worst_eq, rel_to(std::abs(ht - hs), std::abs(hs)));

            const SpectralPoint moved = evolve(c.point, {K, cplx{0.37, 0.21}, 1});
            const Quadruple quad_t = build_dual(moved, c.coupling, c.framing);
            for (int K2 = 1; K2 <= kmax; ++K2) {
                const cplx before = H_spectral(c.point, K2);
                const cplx after_s = H_spectral(moved, K2);
                const cplx after_t = H_trace(quad_t, K2);
                worst_cons = std::max(worst_cons,
                                      rel_to(std::abs(after_s - before), std::abs(before)));
                worst_cons = std::max(worst_cons,
                                      rel_to(std::abs(after_t - before), std::abs(before)));
            }
        }
    }
    // m = 1 cross-check: projection in spectral coordinates vs RK4
    for (int rep = 0; rep < 4; ++rep) {
        SampleRng rng = case_rng(opt, "crosscheck", rep);
        const int n = 2 + rep % 2;
        const Coupling coupling = derived_constants(1, {cplx{1.0, 0.0}});
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
            const SpectralPoint moved = evolve(rec.point, {2, cplx{t, 0.0}, 1});
            const std::vector<cplx> via_spectral = positions(moved, coupling);
            const QModelPoint ode = integrate_eom(qp, gamma, cplx{t, 0.0}, 4000);
            worst_cross = std::max(worst_cross, multiset_distance(via_spectral, ode.q));
        }
    }
    SuiteResult r = make_result("hamiltonian", opt.cases, worst_eq, opt.tol.ham_equality);
    r.pass = r.pass && worst_cons <= opt.tol.ham_conservation &&
             worst_cross <= opt.tol.crosscheck_m1;
    r.note = "conservation " + fmt_e(worst_cons) + ", m1 crosscheck " + fmt_e(worst_cross);
    return r;
}

SuiteResult suite_curves(const VerifyOptions& opt) {
    double worst_ratio = 0.0;
    std::string fail_note;
    for (int i = 0; i < opt.cases && fail_note.empty(); ++i) {
        SampleRng rng = case_rng(opt, "curves", i);
        RandomCase c = draw_case(rng, 4, 5, 3);
        // residue-class structure of the interpolated D and C
        if (c.point.m >= 2) {
            const SpectralFnBundle b = bundle(c.point, c.coupling, c.framing);
            for (const DensePoly* poly : {&b.D, &b.C}) {
                const double scale = std::max(poly->max_abs_coeff(), 1.0);
                for (int k = 0; k <= poly->degree(); ++k)
                    if (mod_m(k - (c.point.m - 2), c.point.m) != 0)
                        worst_ratio = std::max(worst_ratio, std::abs(poly->coeff(k)) / scale /
                                                                opt.tol.divisibility);
            }
        }
        for (int delta : {1, 2}) {
            CurvePolys curve;
            try {
                curve = curve_polys(c.point, c.coupling, c.framing, delta);
            } catch (const std::exception& e) {
                fail_note = std::string("curve_polys: ") + e.what();
                break;
            }
            if (curve.q.degree() != c.point.n - 1) {
                fail_note = "deg q != n-1";
                break;
            }
            worst_ratio = std::max(worst_ratio,
                                   incidence_check(curve, c.point) / opt.tol.incidence);
            worst_ratio = std::max(
                worst_ratio,
                equivariance_check(c.point, c.coupling, c.framing, delta) / opt.tol.equivariance);

            double lam_max = 0.0;
            for (const cplx& l : c.point.lambda) lam_max = std::max(lam_max, std::abs(l));
            std::vector<cplx> zs(8);
            for (cplx& z : zs) z = rng.annulus(0.6 * lam_max, 1.5 * lam_max);
            const QuotientSamples qs = quotient_samples(curve, zs);
            for (const QuotientSample& s : qs.samples) {
                const cplx lhs = curve.q.eval(s.a) * s.c - curve.p.eval(s.a);
                const double scale =
                    std::max(1.0, std::abs(curve.q.eval(s.a) * s.c) + std::abs(curve.p.eval(s.a)));
                worst_ratio = std::max(worst_ratio, std::abs(lhs) / scale / opt.tol.quotient);
                const double ab_scale = std::max(1.0, std::abs(std::pow(s.c, curve.m)));
                worst_ratio = std::max(worst_ratio, std::abs(s.a * s.b - std::pow(s.c, curve.m)) /
                                                        ab_scale / opt.tol.quotient_ab);
            }
        }
    }
    SuiteResult r;
    r.name = "curves";
    r.cases = opt.cases;
    r.max_residual = worst_ratio;  // worst residual as a fraction of its own tolerance
    r.tolerance = 1.0;
    r.pass = fail_note.empty() && worst_ratio <= 1.0;
    r.note = fail_note;
    return r;
}

} // namespace

RandomCase draw_case(SampleRng& rng, int m_max, int n_max, int d_max, bool force_spinless) {
    RandomCase c;
    const int m = 1 + static_cast<int>(rng.next_u64() % std::uint64_t(m_max));
    const int n = 1 + static_cast<int>(rng.next_u64() % std::uint64_t(n_max));
    c.coupling = draw_regular_coupling(rng, m);
    int d = 0;
    if (!force_spinless && d_max > 0 && rng.uniform() < 0.5)
        d = 1 + static_cast<int>(rng.next_u64() % std::uint64_t(d_max));
    SampleConfig cfg;
    cfg.lambda_pow_gap = kSuiteLambdaPowGap;
    SampledPoint sp = sample(rng, m, n, c.coupling, d, cfg);
    c.point = std::move(sp.point);
    c.framing = std::move(sp.framing);
    return c;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{
        "lemma1", "lemma2", "constraint", "thm1",      "thm2",       "brackets",
        "partials", "gauge", "roundtrip",  "hamiltonian", "curves"};
    return names;
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& opt) {
    if (name == "lemma1") return suite_lemma1(opt);
    if (name == "lemma2") return suite_lemma2(opt);
    if (name == "constraint") return suite_constraint(opt);
    if (name == "thm1") return suite_thm1(opt);
    if (name == "thm2") return suite_thm2(opt);
    if (name == "brackets") return suite_brackets(opt);
    if (name == "partials") return suite_partials(opt);
    if (name == "gauge") return suite_gauge(opt);
    if (name == "roundtrip") return suite_roundtrip(opt);
    if (name == "hamiltonian") return suite_hamiltonian(opt);
    if (name == "curves") return suite_curves(opt);
    throw ConfigError("unknown suite: " + name);
}

std::vector<SuiteResult> run_suites(const VerifyOptions& opt,
                                    const std::optional<std::string>& only) {
    std::vector<SuiteResult> out;
    for (const std::string& name : suite_names()) {
        if (only && *only != name) continue;
        out.push_back(run_suite(name, opt));
    }
    if (out.empty()) throw ConfigError("unknown suite: " + (only ? *only : std::string{}));
    return out;
}

} // namespace ccm
