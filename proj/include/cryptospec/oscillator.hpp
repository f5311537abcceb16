#pragma once
// Complexified harmonic oscillator: the three quantizations, and the kernel of the constraint
// G = ab + a^dag b^dag in the two-mode number basis |n, m>.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace cryptospec {

using Rational = boost::multiprecision::cpp_rational;

enum class OscQuantization { real_axis_gauge, imag_axis_gauge, dirac_constraint };

/// k + 1/2, -k - 1/2, or k.
double osc_spectrum(OscQuantization mode, int k);

/// Solution of G psi = 0 in the block n - m = d, psi = sum_j c_j |j + d, j> (d >= 0)
/// or sum_j c_j |j, j + |d|> (d < 0), normalised by gamma_0 = 1, i.e. c_0 = sqrt(|d|!).
struct KernelState {
  int energy = 0;  // d, the eigenvalue of H = n - m on the block
  /// Exact gamma_j with c_j = gamma_j sqrt((j + |d|)! j!). For d = 0 this is c_j / j!.
  std::vector<Rational> gamma;

  /// Exact c_j; only available for d = 0, where every c_j is rational.
  [[nodiscard]] Rational exact(int j) const;
  /// c_j in floating point.
  [[nodiscard]] double value(int j) const;
  [[nodiscard]] int size() const { return static_cast<int>(gamma.size()); }
};

/// Coefficients j = 0..j_max from gamma_{j+1} (j + |d| + 1)(j + 1) = -gamma_{j-1}, gamma_1 = 0.
KernelState dirac_kernel_state(int d, int j_max);

struct ConstrainedMatrices {
  int N = 0;
  Eigen::MatrixXd H;  // diag(n - m)
  Eigen::MatrixXd G;  // <n+1, m+1| G |n, m> = sqrt((n+1)(m+1)), symmetric

  [[nodiscard]] int index(int n, int m) const { return n * (N + 1) + m; }
};

/// Dense H and G on the truncated basis 0 <= n, m <= N.
ConstrainedMatrices build_constrained_matrices(int N);

/// Truncated kernel state of block d embedded in the basis of `mats`.
Eigen::VectorXd embed_kernel_state(const ConstrainedMatrices& mats, const KernelState& state);

}  // namespace cryptospec
