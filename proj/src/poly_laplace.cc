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

#include "semimarkov/poly_laplace.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "semimarkov/errors.h"

namespace semimarkov {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool pole_less(const cdouble& a, const cdouble& b) {
    if (a.real() != b.real()) {
        return a.real() < b.real();
    }
    return a.imag() < b.imag();
}

double factorial(int k) {
    double f = 1;
    for (int i = 2; i <= k; i++) {
        f *= i;
    }
    return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<cdouble> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
}

Polynomial::Polynomial(std::initializer_list<cdouble> coeffs) : coeffs_(coeffs) {
    trim();
}

Polynomial Polynomial::constant(cdouble c) {
    return Polynomial(std::vector<cdouble>{c});
}

Polynomial Polynomial::linear_factor(cdouble root) {
    return Polynomial(std::vector<cdouble>{-root, 1.0});
}

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == cdouble(0)) {
        coeffs_.pop_back();
    }
}

bool Polynomial::has_real_coefficients() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const cdouble& c) { return c.imag() == 0; });
}

cdouble Polynomial::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) {
        return 0;
    }
    return coeffs_[k];
}

cdouble Polynomial::leading() const {
    return coeffs_.empty() ? cdouble(0) : coeffs_.back();
}

cdouble Polynomial::operator()(cdouble u) const {
    cdouble acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * u + *it;
    }
    return acc;
}

Polynomial Polynomial::derivative(int order) const {
    std::vector<cdouble> c(coeffs_);
    for (int o = 0; o < order && !c.empty(); o++) {
        std::vector<cdouble> d;
        for (size_t k = 1; k < c.size(); k++) {
            d.push_back(c[k] * static_cast<double>(k));
        }
        c = std::move(d);
    }
    return Polynomial(std::move(c));
}

Polynomial Polynomial::shifted(cdouble center) const {
    // Repeated synthetic division by (u - center).
    std::vector<cdouble> c(coeffs_);
    int n = static_cast<int>(c.size());
    for (int j = 0; j < n; j++) {
        for (int k = n - 2; k >= j; k--) {
            c[k] += center * c[k + 1];
        }
    }
    return Polynomial(std::move(c));
}

Polynomial Polynomial::divided_by_u() const {
    if (coeffs_.size() <= 1) {
        return {};
    }
    return Polynomial(std::vector<cdouble>(coeffs_.begin() + 1, coeffs_.end()));
}

Polynomial Polynomial::monic() const {
    if (is_zero()) {
        throw std::invalid_argument("monic() of the zero polynomial");
    }
    return *this * (1.0 / leading());
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<cdouble> c(std::max(coeffs_.size(), o.coeffs_.size()));
    for (size_t k = 0; k < c.size(); k++) {
        c[k] = coeff(static_cast<int>(k)) + o.coeff(static_cast<int>(k));
    }
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    return *this + o * cdouble(-1);
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) {
        return {};
    }
    std::vector<cdouble> c(coeffs_.size() + o.coeffs_.size() - 1);
    for (size_t i = 0; i < coeffs_.size(); i++) {
        for (size_t j = 0; j < o.coeffs_.size(); j++) {
            c[i + j] += coeffs_[i] * o.coeffs_[j];
        }
    }
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(cdouble s) const {
    std::vector<cdouble> c(coeffs_);
    for (auto& x : c) {
        x *= s;
    }
    return Polynomial(std::move(c));
}

double Polynomial::magnitude_at(double abs_u) const {
    double acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * abs_u + std::abs(*it);
    }
    return acc;
}

PolyDivision divide(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) {
        throw std::invalid_argument("polynomial division by zero");
    }
    int da = a.degree();
    int db = b.degree();
    if (da < db) {
        return {Polynomial{}, a};
    }
    std::vector<cdouble> rem(a.coeffs().begin(), a.coeffs().end());
    std::vector<cdouble> quo(da - db + 1);
    cdouble lead = b.leading();
    for (int k = da - db; k >= 0; k--) {
        cdouble q = rem[k + db] / lead;
        quo[k] = q;
        for (int j = 0; j <= db; j++) {
            rem[k + j] -= q * b.coeff(j);
        }
        rem[k + db] = 0;
    }
    rem.resize(db);
    return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
}

// ---------------------------------------------------------------------------
// Root finding

namespace {

std::vector<cdouble> companion_eigenvalues(const Polynomial& p) {
    int n = p.degree();
    cdouble lead = p.leading();
    std::vector<cdouble> out;
    if (p.has_real_coefficients()) {
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
        for (int i = 1; i < n; i++) {
            c(i, i - 1) = 1.0;
        }
        for (int i = 0; i < n; i++) {
            c(i, n - 1) = -(p.coeff(i) / lead).real();
        }
        Eigen::EigenSolver<Eigen::MatrixXd> solver(c, false);
        if (solver.info() != Eigen::Success) {
            throw NumericalError("companion eigenvalue solver failed");
        }
        for (int i = 0; i < n; i++) {
            out.push_back(solver.eigenvalues()(i));
        }
    } else {
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
        for (int i = 1; i < n; i++) {
            c(i, i - 1) = 1.0;
        }
        for (int i = 0; i < n; i++) {
            c(i, n - 1) = -(p.coeff(i) / lead);
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(c, false);
        if (solver.info() != Eigen::Success) {
            throw NumericalError("companion eigenvalue solver failed");
        }
        for (int i = 0; i < n; i++) {
            out.push_back(solver.eigenvalues()(i));
        }
    }
    return out;
}

struct NewtonResult {
    cdouble z;
    bool converged;
};

NewtonResult newton(const Polynomial& q, cdouble z, int max_iter) {
    Polynomial dq = q.derivative();
    for (int it = 0; it < max_iter; it++) {
        cdouble v = q(z);
        if (std::abs(v) <= 4 * kEps * q.magnitude_at(std::abs(z))) {
            return {z, true};
        }
        cdouble d = dq(z);
        if (d == cdouble(0)) {
            return {z, false};
        }
        cdouble step = v / d;
        z -= step;
        if (std::abs(step) <= 4 * kEps * (1 + std::abs(z))) {
            return {z, true};
        }
    }
    return {z, false};
}

/// True when p is numerically indistinguishable from a polynomial with an
/// m-fold root at *center (polished in place).
bool accepts_multiple_root(const Polynomial& p, cdouble* center, int m, const Tolerances& tol) {
    auto polished = newton(p.derivative(m - 1), *center, tol.newton_max_iterations);
    cdouble c = polished.z;
    Polynomial taylor = p.shifted(c);
    std::vector<cdouble> abs_coeffs;
    for (auto a : p.coeffs()) {
        abs_coeffs.push_back(std::abs(a));
    }
    Polynomial abs_taylor = Polynomial(std::move(abs_coeffs)).shifted(std::abs(c));
    double slack = 32.0 * (p.degree() + 1) * kEps;
    for (int j = 0; j < m; j++) {
        if (std::abs(taylor.coeff(j)) > slack * abs_taylor.coeff(j).real()) {
            return false;
        }
    }
    *center = c;
    return true;
}

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
};

}  // namespace

std::vector<Root> poly_roots(const Polynomial& p, const Tolerances& tol) {
    if (p.degree() < 1) {
        throw std::invalid_argument("poly_roots requires degree >= 1, got degree " + std::to_string(p.degree()));
    }
    int n = p.degree();
    if (n == 1) {
        return {Root{-p.coeff(0) / p.coeff(1), 1}};
    }
    std::vector<cdouble> z = companion_eigenvalues(p);

    struct Edge {
        double d;
        int i, j;
    };
    std::vector<Edge> edges;
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            double d = std::abs(z[i] - z[j]);
            double scale = 1 + std::max(std::abs(z[i]), std::abs(z[j]));
            if (d <= tol.multiplicity_probe_radius * scale) {
                edges.push_back({d, i, j});
            }
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.d < b.d; });

    DisjointSets sets(n);
    std::vector<std::vector<int>> members(n);
    std::vector<cdouble> centers(z);
    std::vector<bool> polished_center(n, false);
    for (int i = 0; i < n; i++) {
        members[i] = {i};
    }
    for (const auto& e : edges) {
        int a = sets.find(e.i);
        int b = sets.find(e.j);
        if (a == b) {
            continue;
        }
        std::vector<int> merged(members[a]);
        merged.insert(merged.end(), members[b].begin(), members[b].end());
        cdouble centroid = 0;
        for (int k : merged) {
            centroid += z[k];
        }
        centroid /= static_cast<double>(merged.size());
        int m = static_cast<int>(merged.size());
        bool fine = e.d <= tol.root_radius * (1 + std::abs(centroid));
        cdouble center = centroid;
        bool multiple = accepts_multiple_root(p, &center, m, tol);
        if (!fine && !multiple) {
            continue;
        }
        sets.parent[b] = a;
        members[a] = std::move(merged);
        members[b].clear();
        centers[a] = multiple ? center : centroid;
        polished_center[a] = multiple;
    }

    std::vector<Root> roots;
    for (int i = 0; i < n; i++) {
        if (sets.find(i) != i) {
            continue;
        }
        int m = static_cast<int>(members[i].size());
        cdouble value = centers[i];
        if (m == 1) {
            auto res = newton(p, value, tol.newton_max_iterations);
            double backward = std::abs(p(res.z)) / std::max(p.magnitude_at(std::abs(res.z)), 1e-300);
            if (!res.converged && backward > 1e3 * kEps) {
                throw NumericalError("Newton polishing of polynomial root did not converge");
            }
            double gap = std::numeric_limits<double>::infinity();
            for (int k = 0; k < n; k++) {
                if (k != i) {
                    gap = std::min(gap, std::abs(z[k] - z[i]));
                }
            }
            if (std::abs(res.z - value) < 0.5 * gap) {
                value = res.z;
            }
        } else if (!polished_center[i]) {
            value = newton(p.derivative(m - 1), value, tol.newton_max_iterations).z;
        }
        roots.push_back({value, m});
    }

    if (p.has_real_coefficients()) {
        // Complex roots of a real polynomial come in exact conjugate pairs.
        for (auto& r : roots) {
            if (std::abs(r.value.imag()) <= 4 * kEps * (1 + std::abs(r.value))) {
                r.value = r.value.real();
            }
        }
        for (auto& r : roots) {
            if (r.value.imag() <= 0) {
                continue;
            }
            Root* partner = nullptr;
            double best = std::numeric_limits<double>::infinity();
            for (auto& s : roots) {
                if (s.value.imag() < 0 && s.multiplicity == r.multiplicity) {
                    double d = std::abs(s.value - std::conj(r.value));
                    if (d < best) {
                        best = d;
                        partner = &s;
                    }
                }
            }
            if (partner != nullptr) {
                partner->value = std::conj(r.value);
            }
        }
    }
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return pole_less(a.value, b.value); });
    return roots;
}

// ---------------------------------------------------------------------------
// RationalLaplace

RationalLaplace::RationalLaplace(Polynomial num, Polynomial den) {
    if (den.is_zero()) {
        throw std::invalid_argument("rational transform with zero denominator");
    }
    cdouble lead = den.leading();
    num_ = num * (1.0 / lead);
    den_ = den * (1.0 / lead);
    den_factors_ = {den_};
}

RationalLaplace::RationalLaplace(Polynomial num, std::vector<Polynomial> den_factors) {
    cdouble scale = 1;
    Polynomial den = Polynomial::constant(1);
    for (auto& f : den_factors) {
        if (f.is_zero()) {
            throw std::invalid_argument("rational transform with zero denominator factor");
        }
        scale *= f.leading();
        f = f.monic();
        den = den * f;
    }
    num_ = num * (1.0 / scale);
    den_ = std::move(den);
    den_factors_ = std::move(den_factors);
}

std::vector<Root> RationalLaplace::poles(const Tolerances& tol) const {
    std::vector<Root> all;
    for (const auto& f : den_factors_) {
        if (f.degree() < 1) {
            continue;
        }
        for (const auto& r : poly_roots(f, tol)) {
            bool merged = false;
            for (auto& existing : all) {
                if (std::abs(existing.value - r.value) <= tol.root_radius * (1 + std::abs(r.value))) {
                    existing.multiplicity += r.multiplicity;
                    merged = true;
                    break;
                }
            }
            if (!merged) {
                all.push_back(r);
            }
        }
    }
    std::sort(all.begin(), all.end(), [](const Root& a, const Root& b) { return pole_less(a.value, b.value); });
    return all;
}

ProperSplit split_proper(const RationalLaplace& r) {
    auto division = divide(r.num(), r.den());
    std::vector<Polynomial> factors(r.den_factors().begin(), r.den_factors().end());
    return {division.quotient, RationalLaplace(division.remainder, std::move(factors))};
}

// ---------------------------------------------------------------------------
// ExpPolyFunction

ExpPolyFunction::ExpPolyFunction(std::vector<ExpTerm> terms) : terms_(std::move(terms)) {
    canonicalize();
}

ExpPolyFunction ExpPolyFunction::constant(double c) {
    return ExpPolyFunction({ExpTerm{0.0, {c}}});
}

void ExpPolyFunction::canonicalize() {
    std::stable_sort(terms_.begin(), terms_.end(), [](const ExpTerm& a, const ExpTerm& b) {
        return pole_less(a.pole, b.pole);
    });
    std::vector<ExpTerm> out;
    for (auto& t : terms_) {
        if (!out.empty() && std::abs(out.back().pole - t.pole) <= 4 * kEps * (1 + std::abs(t.pole))) {
            auto& c = out.back().coeffs;
            if (c.size() < t.coeffs.size()) {
                c.resize(t.coeffs.size());
            }
            for (size_t k = 0; k < t.coeffs.size(); k++) {
                c[k] += t.coeffs[k];
            }
        } else {
            out.push_back(std::move(t));
        }
    }
    std::vector<ExpTerm> kept;
    for (auto& t : out) {
        while (!t.coeffs.empty() && t.coeffs.back() == cdouble(0)) {
            t.coeffs.pop_back();
        }
        if (!t.coeffs.empty()) {
            kept.push_back(std::move(t));
        }
    }
    terms_ = std::move(kept);
}

cdouble ExpPolyFunction::evaluate_complex(double t) const {
    cdouble sum = 0;
    for (const auto& term : terms_) {
        cdouble poly = 0;
        for (auto it = term.coeffs.rbegin(); it != term.coeffs.rend(); ++it) {
            poly = poly * t + *it;
        }
        sum += poly * std::exp(term.pole * t);
    }
    return sum;
}

double ExpPolyFunction::operator()(double t, const Tolerances& tol) const {
    if (!(t >= 0)) {
        throw std::domain_error("ExpPolyFunction evaluated at negative time " + std::to_string(t));
    }
    cdouble v = evaluate_complex(t);
    if (std::abs(v.imag()) > tol.imag_cap * (1 + std::abs(v.real()))) {
        throw NumericalError("imaginary residue " + std::to_string(v.imag()) + " at t=" + std::to_string(t));
    }
    return v.real();
}

ExpPolyFunction ExpPolyFunction::derivative() const {
    std::vector<ExpTerm> out;
    for (const auto& term : terms_) {
        size_t n = term.coeffs.size();
        std::vector<cdouble> d(n);
        for (size_t k = 0; k < n; k++) {
            d[k] = term.pole * term.coeffs[k];
            if (k + 1 < n) {
                d[k] += static_cast<double>(k + 1) * term.coeffs[k + 1];
            }
        }
        out.push_back({term.pole, std::move(d)});
    }
    return ExpPolyFunction(std::move(out));
}

ExpPolyFunction ExpPolyFunction::operator+(const ExpPolyFunction& o) const {
    std::vector<ExpTerm> all(terms_);
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    return ExpPolyFunction(std::move(all));
}

ExpPolyFunction ExpPolyFunction::operator-(const ExpPolyFunction& o) const {
    return *this + o * -1.0;
}

ExpPolyFunction ExpPolyFunction::operator*(const ExpPolyFunction& o) const {
    std::vector<ExpTerm> out;
    for (const auto& a : terms_) {
        for (const auto& b : o.terms_) {
            std::vector<cdouble> c(a.coeffs.size() + b.coeffs.size() - 1);
            for (size_t i = 0; i < a.coeffs.size(); i++) {
                for (size_t j = 0; j < b.coeffs.size(); j++) {
                    c[i + j] += a.coeffs[i] * b.coeffs[j];
                }
            }
            out.push_back({a.pole + b.pole, std::move(c)});
        }
    }
    return ExpPolyFunction(std::move(out));
}

ExpPolyFunction ExpPolyFunction::operator*(double s) const {
    std::vector<ExpTerm> out(terms_);
    for (auto& t : out) {
        for (auto& c : t.coeffs) {
            c *= s;
        }
    }
    return ExpPolyFunction(std::move(out));
}

double ExpPolyFunction::envelope(double t, bool decaying_only) const {
    double sum = 0;
    for (const auto& term : terms_) {
        if (decaying_only && !(term.pole.real() < 0)) {
            continue;
        }
        double poly = 0;
        for (auto it = term.coeffs.rbegin(); it != term.coeffs.rend(); ++it) {
            poly = poly * t + std::abs(*it);
        }
        sum += poly * std::exp(term.pole.real() * t);
    }
    return sum;
}

double ExpPolyFunction::coefficient_distance(const ExpPolyFunction& o, double pole_tol) const {
    if (terms_.size() != o.terms_.size()) {
        return std::numeric_limits<double>::infinity();
    }
    std::vector<bool> used(o.terms_.size(), false);
    double worst = 0;
    for (const auto& a : terms_) {
        size_t best = o.terms_.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < o.terms_.size(); j++) {
            double d = std::abs(a.pole - o.terms_[j].pole);
            if (!used[j] && d < best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best == o.terms_.size() || best_d > pole_tol * (1 + std::abs(a.pole))) {
            return std::numeric_limits<double>::infinity();
        }
        used[best] = true;
        const auto& b = o.terms_[best];
        size_t n = std::max(a.coeffs.size(), b.coeffs.size());
        for (size_t k = 0; k < n; k++) {
            cdouble ca = k < a.coeffs.size() ? a.coeffs[k] : cdouble(0);
            cdouble cb = k < b.coeffs.size() ? b.coeffs[k] : cdouble(0);
            worst = std::max(worst, std::abs(ca - cb));
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Inversion

ExpPolyFunction invert_laplace(const RationalLaplace& r, const Tolerances& tol) {
    if (!r.is_strictly_proper()) {
        throw std::invalid_argument(
            "invert_laplace requires a strictly proper transform (numerator degree " +
            std::to_string(r.num().degree()) + ", denominator degree " + std::to_string(r.den().degree()) +
            "); the polynomial part is a delta component");
    }
    if (r.num().is_zero()) {
        return {};
    }
    auto poles = r.poles(tol);
    int total = 0;
    for (const auto& p : poles) {
        total += p.multiplicity;
    }
    if (total != r.den().degree()) {
        throw NumericalError("pole multiplicities do not add up to the denominator degree");
    }

    std::vector<ExpTerm> terms;
    for (size_t j = 0; j < poles.size(); j++) {
        int m = poles[j].multiplicity;
        cdouble pj = poles[j].value;
        // Laurent series of num / prod_{i != j} (u - p_i)^{m_i} around p_j.
        Polynomial shifted = r.num().shifted(pj);
        std::vector<cdouble> series(m);
        for (int k = 0; k < m; k++) {
            series[k] = shifted.coeff(k);
        }
        for (size_t i = 0; i < poles.size(); i++) {
            if (i == j) {
                continue;
            }
            int mi = poles[i].multiplicity;
            cdouble d = pj - poles[i].value;
            // (d + e)^{-mi} = d^{-mi} sum_k (-1)^k C(mi + k - 1, k) (e / d)^k
            std::vector<cdouble> factor(m);
            cdouble base = std::pow(d, -mi);
            factor[0] = base;
            for (int k = 1; k < m; k++) {
                factor[k] = factor[k - 1] * (-static_cast<double>(mi + k - 1) / k) / d;
            }
            std::vector<cdouble> prod(m);
            for (int a = 0; a < m; a++) {
                for (int b = 0; a + b < m; b++) {
                    prod[a + b] += series[a] * factor[b];
                }
            }
            series = std::move(prod);
        }
        std::vector<cdouble> coeffs(m);
        for (int k = 0; k < m; k++) {
            coeffs[k] = series[m - 1 - k] / factorial(k);
        }
        terms.push_back({pj, std::move(coeffs)});
    }
    return ExpPolyFunction(std::move(terms));
}

RationalLaplace laplace_transform(const ExpPolyFunction& f) {
    std::vector<Polynomial> factors;
    std::vector<Polynomial> term_dens;
    std::vector<Polynomial> term_nums;
    for (const auto& term : f.terms()) {
        int m = static_cast<int>(term.coeffs.size());
        Polynomial lin = Polynomial::linear_factor(term.pole);
        Polynomial num;
        Polynomial power = Polynomial::constant(1);
        // sum_k a_k k! (u - p)^{m-1-k}, built from the highest k down.
        for (int k = m - 1; k >= 0; k--) {
            num = num + power * (term.coeffs[k] * factorial(k));
            power = power * lin;
        }
        Polynomial den = Polynomial::constant(1);
        for (int k = 0; k < m; k++) {
            den = den * lin;
            factors.push_back(lin);
        }
        term_nums.push_back(num);
        term_dens.push_back(den);
    }
    Polynomial num;
    for (size_t j = 0; j < term_nums.size(); j++) {
        Polynomial t = term_nums[j];
        for (size_t i = 0; i < term_dens.size(); i++) {
            if (i != j) {
                t = t * term_dens[i];
            }
        }
        num = num + t;
    }
    if (factors.empty()) {
        factors.push_back(Polynomial::constant(1));
    }
    return RationalLaplace(num, std::move(factors));
}

}  // namespace semimarkov
