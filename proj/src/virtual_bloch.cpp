#include "mdiqkd/virtual_bloch.hpp"

#include <cmath>
#include <stdexcept>

#include "mdiqkd/errors.hpp"

namespace mdiqkd {
namespace {

constexpr double kMaxCondition = 1e12;

Eigen::Vector2d real_coords(const QubitState& state) {
  if (std::abs(state[0].imag()) > 1e-12 || std::abs(state[1].imag()) > 1e-12) {
    throw std::invalid_argument("qubit state has complex components; sigma_Y would be required");
  }
  return {state[0].real(), state[1].real()};
}

std::array<Eigen::Matrix2d, 3> paulis() {
  Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d x;
  x << 0, 1, 1, 0;
  Eigen::Matrix2d z;
  z << 1, 0, 0, -1;
  return {id, x, z};
}

Eigen::Matrix4d kron2(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  Eigen::Matrix4d out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

TwoQubitVector reference_pair_state(const QubitEmbedding& emb, Setting nu, Setting omega) {
  const Eigen::Vector2d a = real_coords(emb.coords(nu));
  const Eigen::Vector2d b = real_coords(emb.coords(omega));
  return {a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1)};
}

VirtualEnsemble virtual_states(const QubitEmbedding& emb) {
  VirtualEnsemble ens;
  std::array<Eigen::Vector2d, 2> key{real_coords(emb.coords(Setting::plus_alpha)),
                                     real_coords(emb.coords(Setting::minus_alpha))};
  for (int j = 0; j < 2; ++j) {
    for (int s = 0; s < 2; ++s) {
      TwoQubitVector v = TwoQubitVector::Zero();
      for (int jp = 0; jp < 2; ++jp) {
        for (int sp = 0; sp < 2; ++sp) {
          const double sign = ((j * jp + s * sp) % 2 == 0) ? 1.0 : -1.0;
          const Eigen::Vector2d& a = key[jp];
          const Eigen::Vector2d& b = key[sp];
          v += sign / 4.0 * TwoQubitVector{a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1)};
        }
      }
      const double norm_sq = v.squaredNorm();
      if (norm_sq < 1e-30) {
        throw DegenerateStateError("virtual state has vanishing norm");
      }
      ens.p_vir[2 * j + s] = norm_sq;
      ens.vir_states[2 * j + s] = v / std::sqrt(norm_sq);
    }
  }
  return ens;
}

BlochVector bloch_vector(const QubitState& state) {
  const Eigen::Vector2d v = real_coords(state);
  return {v.squaredNorm(), 2.0 * v(0) * v(1), v(0) * v(0) - v(1) * v(1)};
}

Eigen::Matrix<double, 1, 9> two_qubit_bloch_row(const TwoQubitVector& state) {
  static const auto p = paulis();
  Eigen::Matrix<double, 1, 9> row;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      row(3 * i + k) = state.dot(kron2(p[i], p[k]) * state);
    }
  }
  return row;
}

BlochSystem build_bloch_system(const QubitEmbedding& emb) {
  BlochSystem sys;
  for (Setting s : kSettings) {
    const BlochVector b = bloch_vector(emb.coords(s));
    sys.single.row(static_cast<int>(setting_index(s))) << b[0], b[1], b[2];
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(sys.single);
  const auto& sv = svd.singularValues();
  sys.condition = sv(2) > 0.0 ? sv(0) / sv(2) : std::numeric_limits<double>::infinity();
  if (!(sys.condition <= kMaxCondition)) {
    throw SingularSystemError("reference states nearly collinear on the Bloch circle");
  }

  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      sys.S.block<3, 3>(3 * a, 3 * b) = sys.single(a, b) * sys.single;
    }
  }

  const VirtualEnsemble ens = virtual_states(emb);
  sys.S_vir.row(0) = two_qubit_bloch_row(ens.state(0, 0));
  sys.S_vir.row(1) = two_qubit_bloch_row(ens.state(1, 1));
  sys.p_phase << ens.probability(0, 0), ens.probability(1, 1);

  // f S = p^T S_vir  <=>  S^T f^T = S_vir^T p
  const Eigen::Matrix<double, 9, 1> rhs = sys.S_vir.transpose() * sys.p_phase;
  const Eigen::Matrix<double, 9, 1> f = sys.S.transpose().fullPivLu().solve(rhs);
  sys.residual = (sys.S.transpose() * f - rhs).cwiseAbs().maxCoeff();
  for (int i = 0; i < 9; ++i) {
    sys.f_obj[static_cast<std::size_t>(i)] = f(i);
  }
  return sys;
}

}  // namespace mdiqkd
