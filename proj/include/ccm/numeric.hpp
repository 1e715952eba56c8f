// Dense complex linear algebra and polynomial arithmetic sized for mn <= ~50.
//
// Everything here is deterministic and value-semantic: matrices and
// polynomials are immutable after construction, operations are pure, and all
// cutoffs live in Tolerances so tests can pin them.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "ccm/error.hpp"

namespace ccm {

using cplx = std::complex<double>;

// Named numerical cutoffs. Defaults match the library contract; callers that
// need different thresholds pass an adjusted copy instead of mutating state.
struct Tolerances {
    double lu_pivot = 1e-13;           // pivot floor, relative to max |entry|
    double det_singular = 1e-13;       // same floor for determinant
    double adj_det_switch = 1e-10;     // |det| > switch * maxnorm^n uses inverse route
    double root_update = 1e-13;        // Aberth stop on max update, relative to root scale
    int root_max_iter = 500;
    double interp_min_gap = 1e-10;     // node distinctness, relative to node scale
    double poly_trim = 1e-12;          // trailing-coefficient trim, relative to max |coeff|
};

inline const Tolerances& default_tol() {
    static const Tolerances t{};
    return t;
}

// ---------------------------------------------------------------------------
// DensePoly: coefficient list, ascending degree. Trailing near-zeros are
// trimmed on construction; the zero polynomial has an empty coefficient list.
// ---------------------------------------------------------------------------
class DensePoly {
  public:
    DensePoly() = default;
    explicit DensePoly(std::vector<cplx> coeffs, double trim_rel = default_tol().poly_trim);

    static DensePoly zero() { return DensePoly{}; }
    static DensePoly constant(cplx c);
    // Monic polynomial with the given roots.
    static DensePoly from_roots(const std::vector<cplx>& roots);

    bool is_zero() const { return coeffs_.empty(); }
    // Degree of the zero polynomial is reported as -1.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    cplx coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : cplx{}; }
    cplx leading() const { return coeffs_.empty() ? cplx{} : coeffs_.back(); }

    cplx eval(cplx z) const;          // Horner
    DensePoly derivative() const;
    double max_abs_coeff() const;

    DensePoly operator+(const DensePoly& o) const;
    DensePoly operator-(const DensePoly& o) const;
    DensePoly operator*(const DensePoly& o) const;
    DensePoly scaled(cplx s) const;

    // Exact synthetic division by (z - root); remainder is discarded.
    DensePoly deflate(cplx root) const;

  private:
    std::vector<cplx> coeffs_;
};

// ---------------------------------------------------------------------------
// CMatrix: dense row-major complex matrix.
// ---------------------------------------------------------------------------
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}
    CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(const std::vector<cplx>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<cplx>& data() const { return data_; }

    CMatrix operator+(const CMatrix& o) const;
    CMatrix operator-(const CMatrix& o) const;
    CMatrix operator*(const CMatrix& o) const;
    CMatrix scaled(cplx s) const;
    CMatrix transpose() const;

    cplx trace() const;
    double max_norm() const;       // max |entry|
    double frobenius_norm() const;
    double inf_norm() const;       // max row sum of |entries|

    // Submatrix with row i and column j removed.
    CMatrix minor_matrix(std::size_t i, std::size_t j) const;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> data_;
};

// Solve A X = B by LU with partial pivoting. Throws SingularMatrix when a
// pivot falls below tol.lu_pivot * max|A|.
CMatrix lu_solve(const CMatrix& A, const CMatrix& B, const Tolerances& tol = default_tol());

// Determinant by LU with pivot sign tracking; returns 0 on singularity.
cplx determinant(const CMatrix& A, const Tolerances& tol = default_tol());

// Monic characteristic polynomial p(z) = det(z I - A) by the
// Faddeev-LeVerrier recursion.
DensePoly char_poly(const CMatrix& A);

// All complex roots with multiplicity, by Aberth simultaneous iteration on
// the monic normalization. Initial guesses sit on a circle of radius
// 1 + max|coeff|. Throws NoConvergence after tol.root_max_iter sweeps.
std::vector<cplx> poly_roots(const DensePoly& p, const Tolerances& tol = default_tol());

// Eigenvalues as poly_roots(char_poly(A)).
std::vector<cplx> eigenvalues(const CMatrix& A, const Tolerances& tol = default_tol());

// Adjugate: det(A) A^{-1} when the determinant is comfortably nonzero,
// cofactor expansion otherwise. The cofactor route keeps adj finite exactly
// where z I - P is singular.
CMatrix adjugate(const CMatrix& A, const Tolerances& tol = default_tol());

// Unique interpolating polynomial of degree < nodes.size(). Throws
// DuplicateNodes when two nodes are closer than tol.interp_min_gap * scale.
DensePoly lagrange_interp(const std::vector<cplx>& nodes, const std::vector<cplx>& values,
                          const Tolerances& tol = default_tol());

} // namespace ccm
