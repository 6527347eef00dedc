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

#ifndef SEMIMARKOV_QUBIT_H
#define SEMIMARKOV_QUBIT_H

#include <Eigen/Core>
#include <array>
#include <complex>
#include <string>

#include "semimarkov/renewal.h"
#include "semimarkov/waiting_time.h"

namespace semimarkov {

/// A with A_0i = A_i0 = 1 and A_jk = 2 delta_jk - 1; A^2 = 4.
const Eigen::Matrix4d& spectral_matrix();

/// mu = A lambda.
Eigen::Vector4d spectral_transform(const Eigen::Vector4d& lambda);
/// lambda = A mu / 4.
Eigen::Vector4d inverse_spectral_transform(const Eigen::Vector4d& mu);

/// rho -> sum_i lambda_i sigma_i rho sigma_i with sigma_0 = 1.
class PauliChannel {
   public:
    /// Throws SpecError unless lambda is a probability vector (within 1e-12).
    explicit PauliChannel(const Eigen::Vector4d& lambda);

    static PauliChannel identity();
    static PauliChannel phase_flip();
    /// (0, 1/2, 1/2, 0).
    static PauliChannel ep();
    /// (1 - nu) identity + nu phase flip.
    static PauliChannel mixture(double nu);

    const Eigen::Vector4d& lambda() const { return lambda_; }
    /// Eigenvalues on (1, sigma_x, sigma_y, sigma_z).
    Eigen::Vector4d mu() const { return spectral_transform(lambda_); }

    std::string to_string() const;

   private:
    Eigen::Vector4d lambda_;
};

/// Density matrix in the basis (|0>, |1>) with sigma_z |0> = |0>.
class QubitState {
   public:
    /// Throws SpecError unless rho is Hermitian with unit trace and
    /// eigenvalues >= -tol.positivity.
    explicit QubitState(const Eigen::Matrix2cd& rho);

    static QubitState from_bloch(const Eigen::Vector3d& r);
    static QubitState maximally_mixed();

    const Eigen::Matrix2cd& matrix() const { return rho_; }
    Eigen::Vector3d bloch() const;
    double min_eigenvalue() const;

   private:
    Eigen::Matrix2cd rho_;
};

/// lambda_i(t) for i = x, y, z, their derivatives, at one time.
struct MapSnapshot {
    double t = 0;
    Eigen::Vector3d lambda = Eigen::Vector3d::Ones();
    Eigen::Vector3d lambda_dot = Eigen::Vector3d::Zero();
};

/// Lambda(t, 0) = sum_n p_n(t) Phi^n for a Pauli channel Phi; the Pauli
/// eigenvalues are generating functions of the jump count at mu_i.
class DynamicalMap {
   public:
    DynamicalMap(PauliChannel channel, HypoExpWTD wtd);

    const PauliChannel& channel() const { return channel_; }
    const HypoExpWTD& wtd() const { return wtd_; }
    /// Generating function for axis i in {0, 1, 2} = {x, y, z}.
    const GeneratingFunction& axis(int i) const { return axes_.at(static_cast<size_t>(i)); }

    /// Throws std::domain_error for t < 0.
    MapSnapshot snapshot(double t) const;

   private:
    PauliChannel channel_;
    HypoExpWTD wtd_;
    std::array<GeneratingFunction, 3> axes_;
};

MapSnapshot map_snapshot(const PauliChannel& channel, const HypoExpWTD& w, double t);

/// Matrix-element solution for a unital diagonal map. Throws NumericalError
/// if the result has an eigenvalue below -tol.positivity.
QubitState evolve_state(const MapSnapshot& snap, const QubitState& rho0, const Tolerances& tol = kTolerances);

/// mu' = A (1, r_x, r_y, r_z) / 4: eigenvalues of the trace-one Choi matrix
/// of the map with Pauli eigenvalues (1, r).
Eigen::Vector4d choi_vector(const Eigen::Vector3d& ratios);
inline bool is_completely_positive(const Eigen::Vector4d& choi, double tol = kTolerances.choi) {
    return choi.minCoeff() >= -tol;
}

/// Pauli transfer matrix diag(1, r_x, r_y, r_z) in the basis (1, X, Y, Z)/sqrt2.
Eigen::Matrix4d pauli_transfer_matrix(const Eigen::Vector3d& ratios);
/// Choi matrix (1/2) sum_kl E_kl (x) Lambda(E_kl) in the basis |k l>.
Eigen::Matrix4cd choi_matrix(const Eigen::Vector3d& ratios);

}  // namespace semimarkov

#endif
