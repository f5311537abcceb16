#include "cryptospec/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "cryptospec/errors.hpp"

namespace cryptospec {

double osc_spectrum(OscQuantization mode, int k) {
  switch (mode) {
    case OscQuantization::real_axis_gauge:
      if (k < 0) throw DomainError("osc_spectrum: k must be >= 0 in a gauge-fixed quantization");
      return k + 0.5;
    case OscQuantization::imag_axis_gauge:
      if (k < 0) throw DomainError("osc_spectrum: k must be >= 0 in a gauge-fixed quantization");
      return -k - 0.5;
    case OscQuantization::dirac_constraint:
      return k;
  }
  throw DomainError("osc_spectrum: unknown mode");
}

KernelState dirac_kernel_state(int d, int j_max) {
  if (j_max < 2) throw DomainError("dirac_kernel_state: j_max must be >= 2");
  const int shift = std::abs(d);
  KernelState out;
  out.energy = d;
  out.gamma.assign(static_cast<std::size_t>(j_max + 1), Rational(0));
  out.gamma[0] = 1;
  for (int j = 1; j + 1 <= j_max; ++j) {
    out.gamma[static_cast<std::size_t>(j + 1)] =
        -out.gamma[static_cast<std::size_t>(j - 1)] / Rational((j + shift + 1) * (j + 1));
  }
  return out;
}

Rational KernelState::exact(int j) const {
  if (energy != 0) throw DomainError("KernelState::exact: coefficients are irrational for d != 0");
  Rational c = gamma.at(static_cast<std::size_t>(j));
  for (int i = 2; i <= j; ++i) c *= i;
  return c;
}

double KernelState::value(int j) const {
  const Rational& g = gamma.at(static_cast<std::size_t>(j));
  if (g == 0) return 0.0;
  // c_j = (gamma_j j!) sqrt((j+1)(j+2)...(j+|d|)): one rounding for the rational, one for the root.
  Rational scaled = g;
  for (int i = 2; i <= j; ++i) scaled *= i;
  boost::multiprecision::cpp_int rising = 1;
  for (int i = j + 1; i <= j + std::abs(energy); ++i) rising *= i;
  return scaled.convert_to<double>() * std::sqrt(rising.convert_to<double>());
}

ConstrainedMatrices build_constrained_matrices(int N) {
  if (N < 2) throw DomainError("build_constrained_matrices: N must be >= 2");
  ConstrainedMatrices out;
  out.N = N;
  const int dim = (N + 1) * (N + 1);
  out.H = Eigen::MatrixXd::Zero(dim, dim);
  out.G = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n <= N; ++n) {
    for (int m = 0; m <= N; ++m) {
      const int i = out.index(n, m);
      out.H(i, i) = n - m;
      if (n < N && m < N) {
        const int k = out.index(n + 1, m + 1);
        const double v = std::sqrt(static_cast<double>((n + 1) * (m + 1)));
        out.G(k, i) = v;
        out.G(i, k) = v;
      }
    }
  }
  return out;
}

Eigen::VectorXd embed_kernel_state(const ConstrainedMatrices& mats, const KernelState& state) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(mats.H.rows());
  const int shift = std::abs(state.energy);
  for (int j = 0; j < state.size(); ++j) {
    const int n = state.energy >= 0 ? j + shift : j;
    const int m = state.energy >= 0 ? j : j + shift;
    if (n > mats.N || m > mats.N) break;
    v(mats.index(n, m)) = state.value(j);
  }
  return v;
}

}  // namespace cryptospec
