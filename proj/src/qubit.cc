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

#include "semimarkov/qubit.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "semimarkov/csv.h"
#include "semimarkov/errors.h"

namespace semimarkov {

namespace {

using cd = std::complex<double>;

std::array<Eigen::Matrix2cd, 4> paulis() {
    Eigen::Matrix2cd i2, x, y, z;
    i2 << 1, 0, 0, 1;
    x << 0, 1, 1, 0;
    y << 0, cd(0, -1), cd(0, 1), 0;
    z << 1, 0, 0, -1;
    return {i2, x, y, z};
}

Eigen::Matrix2cd apply_diagonal_map(const Eigen::Vector3d& ratios, const Eigen::Matrix2cd& m) {
    // Decompose in the Pauli basis and scale each component.
    auto s = paulis();
    Eigen::Matrix2cd out = 0.5 * (s[0] * m).trace() * s[0];
    for (int i = 0; i < 3; i++) {
        out += 0.5 * ratios(i) * (s[static_cast<size_t>(i + 1)] * m).trace() * s[static_cast<size_t>(i + 1)];
    }
    return out;
}

}  // namespace

const Eigen::Matrix4d& spectral_matrix() {
    static const Eigen::Matrix4d a = [] {
        Eigen::Matrix4d m;
        m << 1, 1, 1, 1, 1, 1, -1, -1, 1, -1, 1, -1, 1, -1, -1, 1;
        return m;
    }();
    return a;
}

Eigen::Vector4d spectral_transform(const Eigen::Vector4d& lambda) {
    return spectral_matrix() * lambda;
}

Eigen::Vector4d inverse_spectral_transform(const Eigen::Vector4d& mu) {
    return 0.25 * (spectral_matrix() * mu);
}

PauliChannel::PauliChannel(const Eigen::Vector4d& lambda) : lambda_(lambda) {
    if (!lambda.allFinite() || lambda.minCoeff() < 0 || std::abs(lambda.sum() - 1) > 1e-12) {
        throw SpecError("Pauli channel weights must be a probability vector");
    }
}

PauliChannel PauliChannel::identity() {
    return PauliChannel(Eigen::Vector4d(1, 0, 0, 0));
}

PauliChannel PauliChannel::phase_flip() {
    return PauliChannel(Eigen::Vector4d(0, 0, 0, 1));
}

PauliChannel PauliChannel::ep() {
    return PauliChannel(Eigen::Vector4d(0, 0.5, 0.5, 0));
}

PauliChannel PauliChannel::mixture(double nu) {
    if (!(nu >= 0 && nu <= 1)) {
        throw SpecError("mixture weight must lie in [0, 1]");
    }
    return PauliChannel(Eigen::Vector4d(1 - nu, 0, 0, nu));
}

std::string PauliChannel::to_string() const {
    return "pauli:" + format_double(lambda_(0)) + "," + format_double(lambda_(1)) + "," + format_double(lambda_(2)) +
           "," + format_double(lambda_(3));
}

QubitState::QubitState(const Eigen::Matrix2cd& rho) : rho_(rho) {
    if (!rho.allFinite() || (rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw SpecError("density matrix must be Hermitian");
    }
    if (std::abs(rho.trace() - cd(1)) > 1e-12) {
        throw SpecError("density matrix must have unit trace");
    }
    if (min_eigenvalue() < -kTolerances.positivity) {
        throw SpecError("density matrix must be positive semidefinite");
    }
}

QubitState QubitState::from_bloch(const Eigen::Vector3d& r) {
    auto s = paulis();
    return QubitState(0.5 * (s[0] + r(0) * s[1] + r(1) * s[2] + r(2) * s[3]));
}

QubitState QubitState::maximally_mixed() {
    return from_bloch(Eigen::Vector3d::Zero());
}

Eigen::Vector3d QubitState::bloch() const {
    return {2 * rho_(1, 0).real(), 2 * rho_(1, 0).imag(), (rho_(0, 0) - rho_(1, 1)).real()};
}

double QubitState::min_eigenvalue() const {
    // Eigenvalues of a 2x2 Hermitian matrix: (tr -+ sqrt(tr^2 - 4 det)) / 2.
    double a = rho_(0, 0).real(), d = rho_(1, 1).real();
    double off = std::abs(rho_(1, 0));
    return 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + off * off);
}

DynamicalMap::DynamicalMap(PauliChannel channel, HypoExpWTD wtd) : channel_(std::move(channel)), wtd_(std::move(wtd)) {
    Eigen::Vector4d mu = channel_.mu();
    for (int i = 0; i < 3; i++) {
        // Rounding in A lambda can push |mu| a hair past 1.
        double m = std::clamp(mu(i + 1), -1.0, 1.0);
        axes_[static_cast<size_t>(i)] = generating_function(wtd_, m);
    }
}

MapSnapshot DynamicalMap::snapshot(double t) const {
    if (!(t >= 0)) {
        throw std::domain_error("dynamical map needs t >= 0");
    }
    MapSnapshot s;
    s.t = t;
    for (int i = 0; i < 3; i++) {
        s.lambda(i) = axes_[static_cast<size_t>(i)].value(t);
        s.lambda_dot(i) = axes_[static_cast<size_t>(i)].derivative(t);
    }
    return s;
}

MapSnapshot map_snapshot(const PauliChannel& channel, const HypoExpWTD& w, double t) {
    return DynamicalMap(channel, w).snapshot(t);
}

QubitState evolve_state(const MapSnapshot& snap, const QubitState& rho0, const Tolerances& tol) {
    const auto& r = rho0.matrix();
    const double lx = snap.lambda(0), ly = snap.lambda(1), lz = snap.lambda(2);
    Eigen::Matrix2cd out;
    out(1, 1) = 0.5 * (1 + lz * (r(1, 1) - r(0, 0)).real());
    out(0, 0) = 1.0 - out(1, 1);
    out(1, 0) = 0.5 * (r(1, 0) * (lx + ly) + r(0, 1) * (lx - ly));
    out(0, 1) = std::conj(out(1, 0));
    double a = out(0, 0).real(), d = out(1, 1).real();
    double min_eig = 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + std::norm(out(1, 0)));
    if (min_eig < -tol.positivity) {
        throw NumericalError("evolved state is not positive; snapshot is not a physical map");
    }
    return QubitState(out);
}

Eigen::Vector4d choi_vector(const Eigen::Vector3d& ratios) {
    return inverse_spectral_transform(Eigen::Vector4d(1, ratios(0), ratios(1), ratios(2)));
}

Eigen::Matrix4d pauli_transfer_matrix(const Eigen::Vector3d& ratios) {
    return Eigen::Vector4d(1, ratios(0), ratios(1), ratios(2)).asDiagonal();
}

Eigen::Matrix4cd choi_matrix(const Eigen::Vector3d& ratios) {
    Eigen::Matrix4cd c = Eigen::Matrix4cd::Zero();
    for (int k = 0; k < 2; k++) {
        for (int l = 0; l < 2; l++) {
            Eigen::Matrix2cd e = Eigen::Matrix2cd::Zero();
            e(k, l) = 1;
            Eigen::Matrix2cd image = apply_diagonal_map(ratios, e);
            for (int i = 0; i < 2; i++) {
                for (int j = 0; j < 2; j++) {
                    c(2 * k + i, 2 * l + j) = 0.5 * image(i, j);
                }
            }
        }
    }
    return c;
}

}  // namespace semimarkov
