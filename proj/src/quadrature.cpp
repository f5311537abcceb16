#include "cryptospec/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "cryptospec/errors.hpp"

namespace cryptospec {

GaussRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw DomainError("gauss_jacobi: need at least one node");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");

  const double ab = alpha + beta;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 0) {
      jac(0, 0) = (beta - alpha) / (ab + 2.0);
    } else {
      jac(k, k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    if (k + 1 < n) {
      const double j = k + 1.0;
      const double t = 2.0 * j + ab;
      const double off = std::sqrt(4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (t * t * (t + 1.0) * (t - 1.0)));
      jac(k, k + 1) = off;
      jac(k + 1, k) = off;
    }
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  if (eig.info() != Eigen::Success) throw NumericalError("gauss_jacobi: eigen-decomposition failed");
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                              std::lgamma(ab + 2.0));

  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double v0 = eig.eigenvectors()(0, k);
    rule.nodes[static_cast<std::size_t>(k)] = eig.eigenvalues()(k);
    rule.weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace cryptospec
