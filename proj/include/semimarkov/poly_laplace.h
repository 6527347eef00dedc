// Copyright 2026 The semimarkov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMIMARKOV_POLY_LAPLACE_H
#define SEMIMARKOV_POLY_LAPLACE_H

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include "semimarkov/tolerances.h"

namespace semimarkov {

using cdouble = std::complex<double>;

/// Polynomial with complex coefficients stored in ascending degree order.
/// Trailing zero coefficients are trimmed on construction, so the leading
/// coefficient of a nonzero polynomial is nonzero.
class Polynomial {
   public:
    Polynomial() = default;
    explicit Polynomial(std::vector<cdouble> coeffs);
    Polynomial(std::initializer_list<cdouble> coeffs);

    static Polynomial constant(cdouble c);
    /// The linear factor (u - root).
    static Polynomial linear_factor(cdouble root);

    /// Degree of the polynomial; the zero polynomial has degree -1.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool has_real_coefficients() const;
    std::span<const cdouble> coeffs() const { return coeffs_; }
    cdouble coeff(int k) const;
    cdouble leading() const;

    cdouble operator()(cdouble u) const;
    Polynomial derivative(int order = 1) const;
    /// Coefficients of p(center + e) as a polynomial in e.
    Polynomial shifted(cdouble center) const;
    /// p(u) / u, assuming the constant term is (analytically) zero; the
    /// constant term is discarded.
    Polynomial divided_by_u() const;
    Polynomial monic() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(cdouble s) const;

    /// Sum of |a_k| |u|^k; scale for rounding-error bounds.
    double magnitude_at(double abs_u) const;

   private:
    void trim();
    std::vector<cdouble> coeffs_;
};

/// Euclidean division a = q b + r with deg r < deg b.
struct PolyDivision {
    Polynomial quotient;
    Polynomial remainder;
};
PolyDivision divide(const Polynomial& a, const Polynomial& b);

struct Root {
    cdouble value;
    int multiplicity = 1;
};

/// Roots of p with multiplicities. Companion-matrix eigenvalues are clustered
/// into multiple roots and each root is polished by Newton iteration (on
/// p^(m-1) for an m-fold root). Roots are returned sorted by (real, imag).
/// Throws std::invalid_argument for degree < 1 and NumericalError when
/// polishing fails to converge.
std::vector<Root> poly_roots(const Polynomial& p, const Tolerances& tol = kTolerances);

/// num(u) / den(u). The denominator may be supplied in factored form, in which
/// case roots are taken factor by factor (repeated linear factors are then
/// exact poles rather than eigenvalue clusters).
class RationalLaplace {
   public:
    RationalLaplace(Polynomial num, Polynomial den);
    RationalLaplace(Polynomial num, std::vector<Polynomial> den_factors);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    std::span<const Polynomial> den_factors() const { return den_factors_; }
    bool is_strictly_proper() const { return num_.degree() < den_.degree(); }

    cdouble operator()(cdouble u) const { return num_(u) / den_(u); }

    /// Poles with multiplicities, merged across factors.
    std::vector<Root> poles(const Tolerances& tol = kTolerances) const;

   private:
    Polynomial num_;
    Polynomial den_;  // monic
    std::vector<Polynomial> den_factors_;  // monic, product == den_
};

/// Splits an improper rational function into its polynomial part and a
/// strictly proper remainder. A nonzero polynomial part corresponds to
/// delta-function (and derivative) components in the time domain.
struct ProperSplit {
    Polynomial polynomial_part;
    RationalLaplace proper;
};
ProperSplit split_proper(const RationalLaplace& r);

/// One pole with its polynomial prefactor: sum_k coeffs[k] t^k e^{pole t}.
struct ExpTerm {
    cdouble pole;
    std::vector<cdouble> coeffs;
};

/// Time-domain function sum_j sum_k c_jk t^k e^{p_j t}. Terms are kept
/// sorted by pole, equal poles merged and all-zero terms dropped.
class ExpPolyFunction {
   public:
    ExpPolyFunction() = default;
    explicit ExpPolyFunction(std::vector<ExpTerm> terms);

    static ExpPolyFunction constant(double c);

    std::span<const ExpTerm> terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Real value at t >= 0. Throws std::domain_error for t < 0 and
    /// NumericalError if the imaginary residue exceeds the tolerance.
    double operator()(double t, const Tolerances& tol = kTolerances) const;
    cdouble evaluate_complex(double t) const;

    ExpPolyFunction derivative() const;
    ExpPolyFunction operator+(const ExpPolyFunction& o) const;
    ExpPolyFunction operator-(const ExpPolyFunction& o) const;
    ExpPolyFunction operator*(const ExpPolyFunction& o) const;
    ExpPolyFunction operator*(double s) const;

    /// Pointwise bound sum |c_jk| t^k e^{Re p_j t} >= |f(t)|, restricted to
    /// terms with Re p < 0 when decaying_only is set.
    double envelope(double t, bool decaying_only = false) const;

    /// Largest |c_jk| difference against another function with the same pole
    /// set; infinity when the pole sets differ beyond pole_tol.
    double coefficient_distance(const ExpPolyFunction& o, double pole_tol = 1e-8) const;

   private:
    void canonicalize();
    std::vector<ExpTerm> terms_;
};

/// Partial-fraction inversion of a strictly proper rational transform:
/// c / (u - p)^(k+1) maps to c t^k e^{p t} / k!. Throws std::invalid_argument
/// for an improper input.
ExpPolyFunction invert_laplace(const RationalLaplace& r, const Tolerances& tol = kTolerances);

/// Forward transform of an ExpPolyFunction, with the denominator in factored
/// form (one linear factor per pole and power).
RationalLaplace laplace_transform(const ExpPolyFunction& f);

/// Convenience wrappers matching the free-function vocabulary.
inline double evaluate(const ExpPolyFunction& f, double t) { return f(t); }
inline ExpPolyFunction differentiate(const ExpPolyFunction& f) { return f.derivative(); }

}  // namespace semimarkov

#endif
