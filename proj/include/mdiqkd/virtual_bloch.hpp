#pragma once

#include <array>

#include <Eigen/Dense>

#include "mdiqkd/states.hpp"

namespace mdiqkd {

/// Real two-qubit amplitude vector, basis order |00>,|01>,|10>,|11> with the
/// first factor belonging to Alice.
using TwoQubitVector = Eigen::Vector4d;

/// (Tr rho, Tr rho X, Tr rho Z).
using BlochVector = std::array<double, 3>;

/// Reference virtual states after Alice and Bob measure their ancillas in the
/// x basis. Entries are indexed by 2*j + s.
struct VirtualEnsemble {
  std::array<double, 4> p_vir{};
  std::array<TwoQubitVector, 4> vir_states{};

  double probability(int j, int s) const { return p_vir[2 * j + s]; }
  const TwoQubitVector& state(int j, int s) const { return vir_states[2 * j + s]; }
};

/// Linear system tying the nine reference yields to the reference
/// phase-error probability. Rows and columns follow the nu-major pair order
/// over {+a, -a, g} and Pauli pairs over {I, X, Z}.
struct BlochSystem {
  Eigen::Matrix3d single;             // single-party Bloch matrix, rows by Setting
  Eigen::Matrix<double, 9, 9> S;      // single (x) single
  Eigen::Matrix<double, 2, 9> S_vir;  // rows: sigma_{0,0}, sigma_{1,1}
  Eigen::Vector2d p_phase;            // (p_vir_{0,0}, p_vir_{1,1})
  PairTable<double> f_obj{};
  double condition = 0.0;             // of the single-party matrix
  double residual = 0.0;              // max |f S - p S_vir|
};

VirtualEnsemble virtual_states(const QubitEmbedding& emb);

/// Throws std::invalid_argument for states with imaginary components.
BlochVector bloch_vector(const QubitState& state);

/// Full Bloch row of a real two-qubit pure state: Tr[rho sigma_i (x) sigma_k].
Eigen::Matrix<double, 1, 9> two_qubit_bloch_row(const TwoQubitVector& state);

/// Throws SingularSystemError when the single-party matrix has condition
/// number above 1e12.
BlochSystem build_bloch_system(const QubitEmbedding& emb);

/// Embedded two-qubit reference state |Phi_nu> (x) |Phi_omega>.
TwoQubitVector reference_pair_state(const QubitEmbedding& emb, Setting nu, Setting omega);

}  // namespace mdiqkd
