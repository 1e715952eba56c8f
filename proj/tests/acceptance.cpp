// Acceptance gate: runs every verification suite at its pinned tolerance and
// prints one pass/fail line per criterion. Exits nonzero when any fails.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "ccm/verify.hpp"

namespace {

struct Criterion {
    std::string label;
    std::vector<std::string> suites;
};

} // namespace

int main() {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();

    ccm::VerifyOptions opt;
    opt.seed = 20240901;
    opt.cases = 200;
    opt.bracket_cases = 100;

    const std::vector<Criterion> criteria{
        {"1. characteristic polynomial factorization (det vs closed form)", {"lemma1"}},
        {"2. closed resolvent identity and LU agreement", {"lemma2"}},
        {"3. moment-map constraint of both builders (signed, with negative control)",
         {"constraint"}},
        {"4. r(lambda_k) = phi_k on spin and spinless points", {"thm1"}},
        {"5. Sklyanin route: s(lambda_k) = theta_k and FD conjugacy brackets",
         {"thm2", "brackets"}},
        {"6. proof-internal derivative identities (symmetry, key, framing partials)",
         {"partials"}},
        {"7. gauge invariance of A, C, D and of spectral recovery", {"gauge"}},
        {"8. recover o build_dual = canonicalize (orbit roundtrip)", {"roundtrip"}},
        {"9. Hamiltonians: trace = spectral, conservation, m=1 ODE cross-check",
         {"hamiltonian"}},
        {"10. interpolation curves: divisibility, degree, incidence, equivariance, quotient",
         {"curves"}},
    };

    int failures = 0;
    for (const Criterion& crit : criteria) {
        std::string detail;
        bool pass = true;
        for (const std::string& suite : crit.suites) {
            const ccm::SuiteResult r = ccm::run_suite(suite, opt);
            pass = pass && r.pass;
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%s max %.3e (tol %.1e)", r.name.c_str(),
                          r.max_residual, r.tolerance);
            if (!detail.empty()) detail += "; ";
            detail += buf;
            if (!r.note.empty()) detail += " [" + r.note + "]";
        }
        std::printf("[%s] %s\n        %s\n", pass ? "PASS" : "FAIL", crit.label.c_str(),
                    detail.c_str());
        if (!pass) ++failures;
    }

    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    std::printf("%d/%zu criteria passed in %.1f s\n", int(criteria.size()) - failures,
                criteria.size(), secs);
    return failures == 0 ? 0 : 1;
}
