#include "ccm/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ccm {

// ---------------------------------------------------------------------------
// DensePoly
// ---------------------------------------------------------------------------

DensePoly::DensePoly(std::vector<cplx> coeffs, double trim_rel) : coeffs_(std::move(coeffs)) {
    double scale = 0.0;
    for (const cplx& c : coeffs_) scale = std::max(scale, std::abs(c));
    const double cut = trim_rel * scale;
    while (!coeffs_.empty() && std::abs(coeffs_.back()) <= cut) coeffs_.pop_back();
}

DensePoly DensePoly::constant(cplx c) {
    return DensePoly{std::vector<cplx>{c}};
}

DensePoly DensePoly::from_roots(const std::vector<cplx>& roots) {
    std::vector<cplx> c{cplx{1.0, 0.0}};
    for (const cplx& r : roots) {
        c.push_back(cplx{});
        for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
        c[0] *= -r;
    }
    // Construction is exact in structure; no trimming of the monic leading 1.
    DensePoly p;
    p.coeffs_ = std::move(c);
    return p;
}

cplx DensePoly::eval(cplx z) const {
    cplx acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

DensePoly DensePoly::derivative() const {
    if (coeffs_.size() <= 1) return DensePoly{};
    std::vector<cplx> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = double(k) * coeffs_[k];
    DensePoly p;
    p.coeffs_ = std::move(d);
    return p;
}

double DensePoly::max_abs_coeff() const {
    double s = 0.0;
    for (const cplx& c : coeffs_) s = std::max(s, std::abs(c));
    return s;
}

DensePoly DensePoly::operator+(const DensePoly& o) const {
    std::vector<cplx> c(std::max(coeffs_.size(), o.coeffs_.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = coeff(k) + o.coeff(k);
    return DensePoly{std::move(c)};
}

DensePoly DensePoly::operator-(const DensePoly& o) const {
    std::vector<cplx> c(std::max(coeffs_.size(), o.coeffs_.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = coeff(k) - o.coeff(k);
    return DensePoly{std::move(c)};
}

DensePoly DensePoly::operator*(const DensePoly& o) const {
    if (is_zero() || o.is_zero()) return DensePoly{};
    std::vector<cplx> c(coeffs_.size() + o.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * o.coeffs_[j];
    return DensePoly{std::move(c)};
}

DensePoly DensePoly::scaled(cplx s) const {
    std::vector<cplx> c = coeffs_;
    for (cplx& x : c) x *= s;
    return DensePoly{std::move(c)};
}

DensePoly DensePoly::deflate(cplx root) const {
    if (coeffs_.size() <= 1) return DensePoly{};
    std::vector<cplx> q(coeffs_.size() - 1);
    cplx carry = coeffs_.back();
    for (std::size_t k = coeffs_.size() - 1; k-- > 0;) {
        q[k] = carry;
        carry = coeffs_[k] + root * carry;
    }
    DensePoly p;
    p.coeffs_ = std::move(q);
    return p;
}

// ---------------------------------------------------------------------------
// CMatrix
// ---------------------------------------------------------------------------

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
        throw ConfigError("CMatrix: data length does not match rows*cols");
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(const std::vector<cplx>& d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
    CMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] + o.data_[k];
    return r;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
    CMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] - o.data_[k];
    return r;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
    CMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const cplx a = at(i, k);
            if (a == cplx{}) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) += a * o.at(k, j);
        }
    }
    return r;
}

CMatrix CMatrix::scaled(cplx s) const {
    CMatrix r = *this;
    for (cplx& x : r.data_) x *= s;
    return r;
}

CMatrix CMatrix::transpose() const {
    CMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

cplx CMatrix::trace() const {
    cplx t{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += at(i, i);
    return t;
}

double CMatrix::max_norm() const {
    double s = 0.0;
    for (const cplx& x : data_) s = std::max(s, std::abs(x));
    return s;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const cplx& x : data_) s += std::norm(x);
    return std::sqrt(s);
}

double CMatrix::inf_norm() const {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) row += std::abs(at(i, j));
        best = std::max(best, row);
    }
    return best;
}

CMatrix CMatrix::minor_matrix(std::size_t i, std::size_t j) const {
    CMatrix r(rows_ - 1, cols_ - 1);
    for (std::size_t a = 0, ra = 0; a < rows_; ++a) {
        if (a == i) continue;
        for (std::size_t b = 0, rb = 0; b < cols_; ++b) {
            if (b == j) continue;
            r.at(ra, rb) = at(a, b);
            ++rb;
        }
        ++ra;
    }
    return r;
}

// ---------------------------------------------------------------------------
// LU factorization helpers
// ---------------------------------------------------------------------------

namespace {

struct LU {
    CMatrix lu;                // packed L (unit diagonal) and U
    std::vector<std::size_t> perm;
    int sign = 1;
    bool singular = false;
};

LU factorize(const CMatrix& A, double pivot_floor) {
    const std::size_t n = A.rows();
    LU f{A, std::vector<std::size_t>(n), 1, false};
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    const double floor = pivot_floor * std::max(A.max_norm(), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(f.lu.at(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(f.lu.at(i, k));
            if (v > best) { best = v; p = i; }
        }
        if (best < floor) { f.singular = true; return f; }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu.at(k, j), f.lu.at(p, j));
            std::swap(f.perm[k], f.perm[p]);
            f.sign = -f.sign;
        }
        const cplx piv = f.lu.at(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx l = f.lu.at(i, k) / piv;
            f.lu.at(i, k) = l;
            for (std::size_t j = k + 1; j < n; ++j) f.lu.at(i, j) -= l * f.lu.at(k, j);
        }
    }
    return f;
}

} // namespace

CMatrix lu_solve(const CMatrix& A, const CMatrix& B, const Tolerances& tol) {
    if (!A.square()) throw ConfigError("lu_solve: A must be square");
    if (B.rows() != A.rows()) throw ConfigError("lu_solve: B.rows must equal A.rows");
    LU f = factorize(A, tol.lu_pivot);
    if (f.singular) throw SingularMatrix("lu_solve: pivot below threshold");
    const std::size_t n = A.rows(), m = B.cols();
    CMatrix X(n, m);
    for (std::size_t col = 0; col < m; ++col) {
        // forward substitution on the permuted right-hand side
        std::vector<cplx> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc = B.at(f.perm[i], col);
            for (std::size_t j = 0; j < i; ++j) acc -= f.lu.at(i, j) * y[j];
            y[i] = acc;
        }
        for (std::size_t i = n; i-- > 0;) {
            cplx acc = y[i];
            for (std::size_t j = i + 1; j < n; ++j) acc -= f.lu.at(i, j) * X.at(j, col);
            X.at(i, col) = acc / f.lu.at(i, i);
        }
    }
    return X;
}

cplx determinant(const CMatrix& A, const Tolerances& tol) {
    if (!A.square()) throw ConfigError("determinant: matrix must be square");
    if (A.rows() == 0) return 1.0;
    LU f = factorize(A, tol.det_singular);
    if (f.singular) return cplx{};
    cplx det = double(f.sign);
    for (std::size_t i = 0; i < A.rows(); ++i) det *= f.lu.at(i, i);
    return det;
}

DensePoly char_poly(const CMatrix& A) {
    if (!A.square()) throw ConfigError("char_poly: matrix must be square");
    const std::size_t n = A.rows();
    // Faddeev-LeVerrier: M_1 = I, c_{n-k} accumulated from traces.
    std::vector<cplx> c(n + 1);
    c[n] = 1.0;
    CMatrix M = CMatrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        if (k > 1) {
            M = A * M;
            for (std::size_t i = 0; i < n; ++i) M.at(i, i) += c[n - k + 1];
        }
        c[n - k] = -(A * M).trace() / double(k);
    }
    DensePoly p{std::move(c), 0.0};
    return p;
}

std::vector<cplx> poly_roots(const DensePoly& p, const Tolerances& tol) {
    const int deg = p.degree();
    if (deg < 1) throw ConfigError("poly_roots: degree must be >= 1");
    // monic normalization
    std::vector<cplx> a(p.coeffs());
    const cplx lead = a.back();
    for (cplx& x : a) x /= lead;

    double maxc = 0.0;
    for (int k = 0; k < deg; ++k) maxc = std::max(maxc, std::abs(a[k]));
    const double radius = 1.0 + maxc;

    std::vector<cplx> z(deg);
    for (int k = 0; k < deg; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / deg + 0.4;
        z[k] = radius * cplx{std::cos(angle), std::sin(angle)};
    }

    auto eval_pair = [&](cplx x, cplx& val, cplx& dval) {
        val = a[deg];
        dval = 0.0;
        for (int k = deg - 1; k >= 0; --k) {
            dval = dval * x + val;
            val = val * x + a[k];
        }
    };
    auto coeff_scale_at = [&](cplx x) {
        double s = 0.0, pw = 1.0;
        const double ax = std::abs(x);
        for (int k = 0; k <= deg; ++k) { s += std::abs(a[k]) * pw; pw *= ax; }
        return s;
    };

    double best_res = std::numeric_limits<double>::infinity();
    std::vector<cplx> best_z = z;
    for (int iter = 0; iter < tol.root_max_iter; ++iter) {
        double max_update = 0.0, scale = 1.0, residual = 0.0;
        for (int k = 0; k < deg; ++k) scale = std::max(scale, std::abs(z[k]));
        for (int k = 0; k < deg; ++k) {
            cplx val, dval;
            eval_pair(z[k], val, dval);
            residual = std::max(residual, std::abs(val) / coeff_scale_at(z[k]));
            if (val == cplx{}) continue;
            const cplx newton = (dval == cplx{}) ? cplx{} : val / dval;
            cplx repulse{};
            for (int j = 0; j < deg; ++j)
                if (j != k) repulse += 1.0 / (z[k] - z[j]);
            const cplx denom = 1.0 - newton * repulse;
            const cplx step = (std::abs(denom) > 1e-300) ? newton / denom : newton;
            z[k] -= step;
            max_update = std::max(max_update, std::abs(step));
        }
        if (residual < best_res) {
            best_res = residual;
            best_z = z;
        }
        // Stop on stalled updates or on backward-small residuals; the latter
        // is what multiple-root clusters actually reach.
        if (max_update < tol.root_update * scale) return z;
        if (residual < 64.0 * (deg + 1) * std::numeric_limits<double>::epsilon()) return z;
    }
    throw NoConvergence("poly_roots: Aberth iteration hit the sweep cap", best_res,
                        std::move(best_z));
}

std::vector<cplx> eigenvalues(const CMatrix& A, const Tolerances& tol) {
    return poly_roots(char_poly(A), tol);
}

CMatrix adjugate(const CMatrix& A, const Tolerances& tol) {
    if (!A.square()) throw ConfigError("adjugate: matrix must be square");
    const std::size_t n = A.rows();
    if (n == 0) return A;
    if (n == 1) return CMatrix::identity(1);
    const cplx det = determinant(A, tol);
    const double cutoff = tol.adj_det_switch * std::pow(std::max(A.max_norm(), 1e-300), double(n));
    if (std::abs(det) > cutoff) {
        CMatrix inv = lu_solve(A, CMatrix::identity(n), tol);
        return inv.scaled(det);
    }
    // Cofactor route: stays finite on singular input.
    CMatrix adj(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const cplx cof = determinant(A.minor_matrix(i, j), tol);
            adj.at(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
        }
    }
    return adj;
}

DensePoly lagrange_interp(const std::vector<cplx>& nodes, const std::vector<cplx>& values,
                          const Tolerances& tol) {
    if (nodes.empty() || nodes.size() != values.size())
        throw ConfigError("lagrange_interp: nodes and values must be nonempty and equal length");
    double scale = 0.0;
    for (const cplx& x : nodes) scale = std::max(scale, std::abs(x));
    const double min_gap = tol.interp_min_gap * std::max(scale, 1.0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (std::abs(nodes[i] - nodes[j]) <= min_gap)
                throw DuplicateNodes("lagrange_interp: nodes too close");

    const DensePoly master = DensePoly::from_roots(nodes);
    std::vector<cplx> acc(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const DensePoly basis = master.deflate(nodes[i]);
        cplx denom{1.0, 0.0};
        for (std::size_t j = 0; j < nodes.size(); ++j)
            if (j != i) denom *= nodes[i] - nodes[j];
        const cplx w = values[i] / denom;
        for (std::size_t k = 0; k < basis.coeffs().size(); ++k) acc[k] += w * basis.coeffs()[k];
    }
    return DensePoly{std::move(acc)};
}

} // namespace ccm
