#pragma once

#include <vector>

namespace cryptospec {

/// Nodes and weights of an n-point Gauss rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta on [-1, 1] (Golub-Welsch).
GaussRule gauss_jacobi(int n, double alpha, double beta);

inline GaussRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

}  // namespace cryptospec
