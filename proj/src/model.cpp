#include "ccm/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ccm {

Coupling derived_constants(int m, const std::vector<cplx>& g) {
    if (m < 1 || g.size() != static_cast<std::size_t>(m))
        throw ConfigError("derived_constants: need len(g) == m >= 1");
    Coupling cp;
    cp.m = m;
    cp.g = g;
    cplx weighted{};
    for (int s = 0; s < m; ++s) {
        cp.abs_g += g[s];
        weighted += (double(m - s) / m) * g[s];
    }
    cp.c.resize(m);
    cplx prefix{};
    for (int i = 0; i < m; ++i) {
        prefix += g[i];
        cp.c[i] = prefix - weighted;
    }
    return cp;
}

RegularityCertificate is_regular(const Coupling& coupling, double eq_tol) {
    RegularityCertificate cert;
    const int m = coupling.m;
    const double gscale = std::abs(coupling.abs_g);
    if (gscale <= eq_tol) {
        cert.reason = "|g| = 0";
        return cert;
    }
    double max_partial = 0.0;
    std::vector<cplx> partials;
    for (int h = 1; h < m; ++h) {
        cplx sum{};
        for (int i = h + 1; i <= m - 1; ++i) {
            sum += coupling.g[i - 1];
            partials.push_back(sum);
            max_partial = std::max(max_partial, std::abs(sum));
        }
    }
    cert.k_max = static_cast<int>(std::ceil(max_partial / gscale)) + 1;
    cert.min_margin = std::numeric_limits<double>::infinity();
    for (const cplx& s : partials) {
        for (int k = -cert.k_max; k <= cert.k_max; ++k) {
            const double margin = std::abs(double(k) * coupling.abs_g - s);
            cert.min_margin = std::min(cert.min_margin, margin);
            if (margin <= eq_tol) {
                cert.reason = "k|g| hits a partial sum (k = " + std::to_string(k) + ")";
                return cert;
            }
        }
    }
    if (partials.empty()) cert.min_margin = gscale;
    cert.regular = true;
    return cert;
}

void check_point(const SpectralPoint& point, double gap_tol) {
    if (point.m < 1 || point.n < 1 ||
        point.lambda.size() != static_cast<std::size_t>(point.n) ||
        point.phi.size() != static_cast<std::size_t>(point.n))
        throw ConfigError("SpectralPoint: inconsistent sizes");
    double scale = 0.0;
    std::vector<cplx> pow(point.n);
    for (int j = 0; j < point.n; ++j) {
        if (std::abs(point.lambda[j]) == 0.0)
            throw DegeneratePoint("SpectralPoint: lambda_j = 0");
        pow[j] = std::pow(point.lambda[j], point.m);
        scale = std::max(scale, std::abs(pow[j]));
    }
    for (int j = 0; j < point.n; ++j)
        for (int k = j + 1; k < point.n; ++k)
            if (std::abs(pow[j] - pow[k]) <= gap_tol * std::max(scale, 1.0))
                throw DegeneratePoint("SpectralPoint: lambda^m values collide");
}

double framing_constraint_residual(const SpinFraming& framing, const Coupling& coupling) {
    const int m = coupling.m;
    if (framing.V.size() != static_cast<std::size_t>(m) ||
        framing.W.size() != static_cast<std::size_t>(m))
        throw ConfigError("SpinFraming: need m blocks");
    const int n = static_cast<int>(framing.V[0].rows());
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        cplx sum{};
        for (int i = 0; i < m; ++i) {
            for (int a = 0; a < framing.d; ++a)
                sum += framing.V[i].at(j, a) * framing.W[i].at(a, j);
        }
        worst = std::max(worst, std::abs(sum - coupling.abs_g));
    }
    return worst;
}

namespace {

// [V_i W_i]_{jk} products for all blocks; vw[i] is n x n.
std::vector<CMatrix> framing_products(const SpinFraming& framing) {
    std::vector<CMatrix> vw;
    vw.reserve(framing.V.size());
    for (std::size_t i = 0; i < framing.V.size(); ++i) vw.push_back(framing.V[i] * framing.W[i]);
    return vw;
}

// Diagonal correction of the dressed X-block at cyclic index i:
//   K_i(j) = c_i - (sum_{r<=i} [V_r W_r]_{jj} - sum_s ((m-s)/m) [V_s W_s]_{jj}).
// The minus sign on the framing part is what makes the built quadruple land
// on the moment-map surface; with a plus it satisfies no signed constraint.
cplx diag_correction(const Coupling& coupling, const std::vector<CMatrix>& vw, int i, int j) {
    const int m = coupling.m;
    i = mod_m(i, m);
    cplx prefix{}, weighted{};
    for (int r = 0; r <= i; ++r) prefix += vw[r].at(j, j);
    for (int s = 0; s < m; ++s) weighted += (double(m - s) / m) * vw[s].at(j, j);
    return coupling.c[i] - (prefix - weighted);
}

SpinFraming spinless_framing(int m, int n, const Coupling& coupling) {
    SpinFraming fr;
    fr.d = 1;
    fr.V.assign(m, CMatrix(n, 1));
    fr.W.assign(m, CMatrix(1, n));
    for (int j = 0; j < n; ++j) {
        fr.V[0].at(j, 0) = 1.0;
        fr.W[0].at(0, j) = coupling.abs_g;
    }
    return fr;
}

} // namespace

Quadruple build_dual(const SpectralPoint& point, const Coupling& coupling,
                     const std::optional<SpinFraming>& framing) {
    check_point(point);
    const int m = point.m, n = point.n;
    if (coupling.m != m) throw ConfigError("build_dual: coupling.m != point.m");
    const bool spin = framing.has_value();
    const SpinFraming fr = spin ? *framing : spinless_framing(m, n, coupling);
    const int d = fr.d;
    const std::vector<CMatrix> vw = framing_products(fr);

    std::vector<cplx> lam_pow(n);
    for (int j = 0; j < n; ++j) lam_pow[j] = std::pow(point.lambda[j], m);

    Quadruple quad;
    quad.m = m;
    quad.n = n;
    quad.f = spin ? d * m : 1;
    quad.model = QuadrupleModel::dual;
    quad.coupling_sign = -1;
    quad.X = CMatrix(m * n, m * n);
    quad.P = CMatrix(m * n, m * n);

    for (int i = 0; i < m; ++i) {
        const int row_p = i, col_p = mod_m(i + 1, m);
        for (int j = 0; j < n; ++j)
            quad.P.at(row_p * n + j, col_p * n + j) = point.lambda[j];

        const int row_x = mod_m(i + 1, m), col_x = i;
        for (int j = 0; j < n; ++j) {
            quad.X.at(row_x * n + j, col_x * n + j) =
                point.phi[j] + diag_correction(coupling, vw, i, j) / point.lambda[j];
            for (int k = 0; k < n; ++k) {
                if (k == j) continue;
                cplx acc{};
                for (int h = 0; h < m; ++h) {
                    acc += vw[mod_m(i - h, m)].at(j, k) *
                           std::pow(point.lambda[j], m - h - 1) * std::pow(point.lambda[k], h);
                }
                quad.X.at(row_x * n + j, col_x * n + k) = -acc / (lam_pow[j] - lam_pow[k]);
            }
        }
    }

    if (spin) {
        quad.v = CMatrix(m * n, d * m);
        quad.w = CMatrix(d * m, m * n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                for (int a = 0; a < d; ++a) {
                    quad.v.at(i * n + j, i * d + a) = fr.V[i].at(j, a);
                    quad.w.at(i * d + a, i * n + j) = fr.W[i].at(a, j);
                }
    } else {
        quad.v = CMatrix(m * n, 1);
        quad.w = CMatrix(1, m * n);
        for (int j = 0; j < n; ++j) {
            quad.v.at(j, 0) = 1.0;
            quad.w.at(0, j) = coupling.abs_g;
        }
    }
    return quad;
}

Quadruple build_qmodel(const QModelPoint& qp, const Coupling& coupling) {
    const int m = qp.m, n = qp.n;
    if (coupling.m != m) throw ConfigError("build_qmodel: coupling.m != qp.m");
    if (qp.p.size() != static_cast<std::size_t>(n) || qp.q.size() != static_cast<std::size_t>(n))
        throw ConfigError("QModelPoint: inconsistent sizes");
    std::vector<cplx> q_pow(n);
    double scale = 0.0;
    for (int j = 0; j < n; ++j) {
        if (std::abs(qp.q[j]) == 0.0) throw DegeneratePoint("QModelPoint: q_j = 0");
        q_pow[j] = std::pow(qp.q[j], m);
        scale = std::max(scale, std::abs(q_pow[j]));
    }
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            if (std::abs(q_pow[j] - q_pow[k]) <= 1e-9 * std::max(scale, 1.0))
                throw DegeneratePoint("QModelPoint: q^m values collide");

    Quadruple quad;
    quad.m = m;
    quad.n = n;
    quad.f = 1;
    quad.model = QuadrupleModel::qmodel;
    quad.coupling_sign = +1;
    quad.X = CMatrix(m * n, m * n);
    quad.P = CMatrix(m * n, m * n);
    for (int i = 0; i < m; ++i) {
        const int row_x = mod_m(i + 1, m);
        for (int j = 0; j < n; ++j) quad.X.at(row_x * n + j, i * n + j) = qp.q[j];

        const int col_p = mod_m(i + 1, m);
        for (int j = 0; j < n; ++j) {
            quad.P.at(i * n + j, col_p * n + j) = qp.p[j] - coupling.c[i] / qp.q[j];
            for (int k = 0; k < n; ++k) {
                if (k == j) continue;
                // Interaction sign mirrors the dual model; with the opposite
                // sign the constraint cannot be satisfied for any w.
                quad.P.at(i * n + j, col_p * n + k) =
                    -coupling.abs_g * std::pow(qp.q[j], i) * std::pow(qp.q[k], m - i - 1) /
                    (q_pow[j] - q_pow[k]);
            }
        }
    }
    quad.v = CMatrix(m * n, 1);
    quad.w = CMatrix(1, m * n);
    for (int j = 0; j < n; ++j) {
        quad.v.at(j, 0) = 1.0;
        quad.w.at(0, j) = -coupling.abs_g;
    }
    return quad;
}

double moment_residual(const Quadruple& quad, const Coupling& coupling, bool flip_w_sign) {
    const int m = quad.m, n = quad.n;
    if (coupling.m != m) throw ConfigError("moment_residual: coupling.m != quad.m");
    CMatrix R = quad.X * quad.P - quad.P * quad.X;
    const double s = double(quad.coupling_sign);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) R.at(i * n + j, i * n + j) -= s * coupling.g[i];
    const CMatrix vw = quad.v * quad.w;
    const double wsign = flip_w_sign ? -1.0 : 1.0;
    for (std::size_t i = 0; i < R.rows(); ++i)
        for (std::size_t j = 0; j < R.cols(); ++j) R.at(i, j) -= wsign * vw.at(i, j);
    return R.frobenius_norm();
}

Quadruple gauge(const Quadruple& quad, const CMatrix& M, const Tolerances& tol) {
    const CMatrix Minv = lu_solve(M, CMatrix::identity(M.rows()), tol);
    const double cond_est = M.inf_norm() * Minv.inf_norm();
    if (cond_est > 1e8)
        throw SingularMatrix("gauge: condition estimate exceeds 1e8");
    Quadruple out = quad;
    out.X = M * quad.X * Minv;
    out.P = M * quad.P * Minv;
    out.v = M * quad.v;
    out.w = quad.w * Minv;
    out.blocks_intact = false;
    return out;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

std::uint64_t SampleRng::next_u64() {
    // splitmix64; fixed algorithm keeps seeded output identical everywhere
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double SampleRng::uniform() {
    return double(next_u64() >> 11) * 0x1.0p-53;
}

cplx SampleRng::unit_disk() {
    while (true) {
        const double x = uniform(-1.0, 1.0), y = uniform(-1.0, 1.0);
        if (x * x + y * y <= 1.0) return {x, y};
    }
}

cplx SampleRng::annulus(double r_lo, double r_hi) {
    const double r = std::sqrt(uniform(r_lo * r_lo, r_hi * r_hi));
    const double a = uniform(0.0, 2.0 * std::numbers::pi);
    return {r * std::cos(a), r * std::sin(a)};
}

SampledPoint sample(SampleRng& rng, int m, int n, const Coupling& coupling, int d,
                    const SampleConfig& cfg) {
    SampledPoint out;
    out.point.m = m;
    out.point.n = n;
    out.point.lambda.resize(n);
    out.point.phi.resize(n);

    int rejections = 0;
    for (int j = 0; j < n; ++j) {
        while (true) {
            const cplx cand = rng.annulus(cfg.lambda_r_lo, cfg.lambda_r_hi);
            const cplx cand_pow = std::pow(cand, m);
            bool ok = true;
            for (int k = 0; k < j; ++k)
                if (std::abs(cand_pow - std::pow(out.point.lambda[k], m)) < cfg.lambda_pow_gap)
                    ok = false;
            if (ok) { out.point.lambda[j] = cand; break; }
            if (++rejections > cfg.max_rejections)
                throw SamplingFailed("sample: could not separate lambda^m values");
        }
    }
    for (int j = 0; j < n; ++j) out.point.phi[j] = rng.unit_disk();

    if (d > 0) {
        SpinFraming fr;
        fr.d = d;
        fr.V.assign(m, CMatrix(n, d));
        fr.W.assign(m, CMatrix(d, n));
        while (true) {
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j)
                    for (int a = 0; a < d; ++a) {
                        fr.V[i].at(j, a) = rng.unit_disk();
                        fr.W[i].at(a, j) = rng.unit_disk();
                    }
            // rescale the j-th column of every W_i to land on the surface
            bool ok = true;
            for (int j = 0; j < n && ok; ++j) {
                cplx sum{};
                for (int i = 0; i < m; ++i)
                    for (int a = 0; a < d; ++a) sum += fr.V[i].at(j, a) * fr.W[i].at(a, j);
                if (std::abs(sum) < cfg.framing_floor) { ok = false; break; }
                const cplx scale = coupling.abs_g / sum;
                for (int i = 0; i < m; ++i)
                    for (int a = 0; a < d; ++a) fr.W[i].at(a, j) *= scale;
            }
            if (ok) break;
            if (++rejections > cfg.max_rejections)
                throw SamplingFailed("sample: framing rescale denominator too small");
        }
        out.framing = std::move(fr);
    }
    return out;
}

double spin_sum_identity_residual(const SpectralPoint& point, const Coupling& coupling,
                                  const SpinFraming& framing) {
    const int m = point.m, n = point.n;
    const std::vector<CMatrix> vw = framing_products(framing);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        cplx total{};
        for (int i = 0; i < m; ++i) {
            cplx prefix{}, weighted{};
            for (int r = 0; r <= i; ++r) prefix += vw[r].at(j, j);
            for (int s = 0; s < m; ++s) weighted += (double(m - s) / m) * vw[s].at(j, j);
            total += coupling.c[i] + prefix - weighted;
        }
        worst = std::max(worst, std::abs(total));
    }
    return worst;
}

double block_pattern_residual(const Quadruple& quad) {
    const int m = quad.m, n = quad.n;
    double worst = 0.0;
    for (int bi = 0; bi < m; ++bi) {
        for (int bj = 0; bj < m; ++bj) {
            const bool x_allowed = (bi == mod_m(bj + 1, m));
            const bool p_allowed = (bj == mod_m(bi + 1, m));
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    if (!x_allowed) worst = std::max(worst, std::abs(quad.X.at(bi * n + r, bj * n + c)));
                    if (!p_allowed) worst = std::max(worst, std::abs(quad.P.at(bi * n + r, bj * n + c)));
                }
        }
    }
    return worst;
}

} // namespace ccm
