// Couplings, spectral coordinates, spin framings, and gauge-orbit
// representatives of the cyclic-quiver Calogero-Moser space.
//
// Two dual block models are built here. Both carry m x m block structure with
// n x n blocks on V = V_0 + ... + V_{m-1}:
//
//   dual model   : P has diag(lambda) at block (i, i+1), X carries the dressed
//                  coordinate blocks at (i+1, i). The quadruple satisfies
//                  [X,P] = -g 1_V + v w  (coupling_sign = -1).
//   q-model      : X has diag(q) at block (i+1, i), P the Lax blocks at
//                  (i, i+1), and [X,P] = +g 1_V + v w  (coupling_sign = +1).
//
// The relative sign is forced: swapping the roles of X and P negates the
// commutator, so the two models can only satisfy the constraint with opposite
// coupling orientation. Builders record the sign they satisfy; it travels
// with the serialized quadruple.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ccm/numeric.hpp"

namespace ccm {

inline int mod_m(int a, int m) {
    const int r = a % m;
    return r < 0 ? r + m : r;
}

// m-tuple coupling with the derived constants c_i and |g| = sum g_s.
struct Coupling {
    int m = 1;
    std::vector<cplx> g;
    std::vector<cplx> c;
    cplx abs_g{};
};

Coupling derived_constants(int m, const std::vector<cplx>& g);

struct RegularityCertificate {
    bool regular = false;
    int k_max = 0;              // scan bound used for the integer multiples
    double min_margin = 0.0;    // smallest |k|g| - partial_sum| seen
    std::string reason;         // empty when regular
};

// Regular couplings: |g| != 0 and k|g| != g_h + ... + g_{i-1} for all
// 1 <= h < i <= m-1 and integers k. The scan is bounded by
// k_max = ceil(max |partial sum| / ||g||) + 1; beyond that the inequality
// holds by magnitude.
RegularityCertificate is_regular(const Coupling& coupling, double eq_tol = 1e-10);

// Point of the dense open subset where the P-side maps are diagonalizable:
// lambda_j != 0 and lambda_j^m pairwise distinct.
struct SpectralPoint {
    int m = 1, n = 1;
    std::vector<cplx> lambda;
    std::vector<cplx> phi;
};

// Spin framing blocks: V[i] is n x d, W[i] is d x n, with the constraint
// sum_i [V_i W_i]_{jj} = |g| for every j.
struct SpinFraming {
    int d = 1;
    std::vector<CMatrix> V;
    std::vector<CMatrix> W;
};

// Residual of the framing constraint surface, max over j.
double framing_constraint_residual(const SpinFraming& framing, const Coupling& coupling);

enum class QuadrupleModel : std::uint8_t { dual, qmodel };

struct Quadruple {
    int m = 1, n = 1, f = 1;
    CMatrix X, P, v, w;
    QuadrupleModel model = QuadrupleModel::dual;
    int coupling_sign = -1;     // s in [X,P] = s g 1_V + v w satisfied by this data
    bool blocks_intact = true;  // false after a general gauge transformation
};

// Validate SpectralPoint invariants; throws DegeneratePoint on violation.
void check_point(const SpectralPoint& point, double gap_tol = 1e-9);

// Dual-model representative from spectral coordinates (and a framing in the
// spin case). Spinless framing: v = ones in block 0, w = |g| ones in block 0.
Quadruple build_dual(const SpectralPoint& point, const Coupling& coupling,
                     const std::optional<SpinFraming>& framing = std::nullopt);

// Positions/momenta model on the X-diagonalizable subset.
struct QModelPoint {
    int m = 1, n = 1;
    std::vector<cplx> p;
    std::vector<cplx> q;
};

Quadruple build_qmodel(const QModelPoint& qp, const Coupling& coupling);

// Frobenius norm of [X,P] - s g 1_V - v w where s is the quadruple's recorded
// coupling sign. Passing flip_w_sign exercises the negative control.
double moment_residual(const Quadruple& quad, const Coupling& coupling,
                       bool flip_w_sign = false);

// Simultaneous conjugation M . (X,P,v,w) = (MXM^-1, MPM^-1, Mv, wM^-1).
// Throws SingularMatrix for ill-conditioned M (condition estimate > 1e8).
Quadruple gauge(const Quadruple& quad, const CMatrix& M,
                const Tolerances& tol = default_tol());

// Deterministic sampling. The generator owns all randomness; identical seeds
// reproduce identical points bit-for-bit.
class SampleRng {
  public:
    explicit SampleRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    // uniform in [0, 1), built from raw bits for cross-platform determinism
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    cplx unit_disk();
    cplx annulus(double r_lo, double r_hi);
    std::uint64_t next_u64();

  private:
    std::uint64_t state_;
};

struct SampleConfig {
    double lambda_r_lo = 0.5;
    double lambda_r_hi = 2.0;
    double lambda_pow_gap = 1e-3;   // minimal pairwise gap of the lambda^m values
    double framing_floor = 1e-6;    // reject |sum_i [V_i W_i]_{jj}| below this
    int max_rejections = 1000;
};

struct SampledPoint {
    SpectralPoint point;
    std::optional<SpinFraming> framing;
};

// Draw lambda from an annulus rejecting lambda^m collisions, phi from the
// unit disk; spin framings are drawn and then the j-th column of every W_i is
// rescaled to land exactly on the constraint surface.
SampledPoint sample(SampleRng& rng, int m, int n, const Coupling& coupling, int d = 0,
                    const SampleConfig& cfg = SampleConfig{});

// Identity sum_i (c_i + sum_{r<=i} [V_r W_r]_{jj}
//                     - sum_s ((m-s)/m) [V_s W_s]_{jj}) = 0, max over j.
double spin_sum_identity_residual(const SpectralPoint& point, const Coupling& coupling,
                                  const SpinFraming& framing);

// How far X and P are from their cyclic block patterns (max |entry| outside
// the allowed blocks).
double block_pattern_residual(const Quadruple& quad);

} // namespace ccm
