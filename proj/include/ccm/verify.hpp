// Randomized verification suites over the whole library: every suite draws
// deterministic cases from a seed, reports its worst residual against a
// pinned tolerance, and the acceptance gate is the conjunction.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccm/model.hpp"

namespace ccm {

struct VerifyTolerances {
    double lemma1 = 1e-9;           // det vs closed-form A, relative
    double lemma2_identity = 1e-10; // (zI - L) R(z) - I, max norm
    double lemma2_lu = 1e-9;        // closed resolvent vs LU solve
    double constraint = 1e-10;      // moment residual of both builders
    double thm1 = 1e-8;             // r(lambda_k) vs phi_k, relative
    double thm2 = 1e-8;             // s(lambda_k) vs theta_closed, relative
    double bracket = 1e-5;          // FD {lam,theta} and {theta,theta}
    double eq16 = 1e-6;             // spinless df_j/dlam_k symmetry
    double key_identity = 1e-7;     // scalar derivative identity
    double spin_partials = 1e-5;    // analytic vs FD framing partials
    double gauge_acd = 1e-7;        // A, C, D under conjugation, relative
    double gauge_recover = 1e-6;    // recover_spectral orbit distance
    double roundtrip = 1e-7;        // recover o build_dual vs canonicalize
    double ham_equality = 1e-9;     // H_trace vs H_spectral, relative
    double ham_conservation = 1e-8; // H along the flow, relative
    double crosscheck_m1 = 1e-6;    // projection vs RK4 position multisets
    double divisibility = 1e-8;     // off-pattern coefficients, x scale
    double incidence = 1e-8;
    double equivariance = 1e-9;
    double quotient = 1e-9;         // |q(a)c - p(a)| normalized
    double quotient_ab = 1e-12;     // |ab - c^m| x scale
};

struct VerifyOptions {
    std::uint64_t seed = 20240901;
    int cases = 200;
    int bracket_cases = 100;  // FD suites use min(cases, bracket_cases)
    VerifyTolerances tol;
};

struct SuiteResult {
    std::string name;
    int cases = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

// Suites in execution order: lemma1, lemma2, constraint, thm1, thm2,
// brackets, partials, gauge, roundtrip, hamiltonian, curves.
const std::vector<std::string>& suite_names();

SuiteResult run_suite(const std::string& name, const VerifyOptions& opt);

// All suites, optionally filtered to one name. Unknown names throw ConfigError.
std::vector<SuiteResult> run_suites(const VerifyOptions& opt,
                                    const std::optional<std::string>& only = std::nullopt);

// Deterministic random test case (coupling regular by construction).
struct RandomCase {
    Coupling coupling;
    SpectralPoint point;
    std::optional<SpinFraming> framing;
};

RandomCase draw_case(SampleRng& rng, int m_max, int n_max, int d_max, bool force_spinless = false);

// Grade-preserving gauge transformation (block-diagonal over the vertex
// spaces, mild condition number). Dense conjugations leave the moment-map
// surface because g 1_V only commutes with the graded subgroup.
CMatrix random_block_gauge(SampleRng& rng, int m, int n);

} // namespace ccm
