#pragma once

#include <string>
#include <vector>

#include "cryptospec/core.hpp"

namespace cryptospec {

/// Half-line z = s e^{i alpha}, s >= 0.
struct Ray {
  double alpha = 0.0;
  cplx phi{1.0, 0.0};

  /// alpha must lie in (-pi, 3pi/2].
  static Ray at(double alpha);
};

enum class SectorKind { discrete, continuous, empty, boundary };

std::string to_string(SectorKind kind);

struct SectorClass {
  SectorKind kind = SectorKind::boundary;
  int m = -1;  // family index for discrete sectors
  /// Smallest angular distance of alpha or pi - alpha to a Stokes asymptote.
  double asymptote_distance = 0.0;

  [[nodiscard]] std::string name() const;
  friend bool operator==(const SectorClass& a, const SectorClass& b) { return a.kind == b.kind && a.m == b.m; }
};

enum class LevelMethod { shooting, semiclassical };

std::string to_string(LevelMethod method);

struct Level {
  int k = 0;
  double E = 0.0;
  LevelMethod method = LevelMethod::shooting;
};

struct SpectrumResult {
  PotentialSpec spec;
  Ray ray;
  SectorClass classification;
  std::vector<Level> levels;  // strictly increasing in E
  std::vector<std::string> diagnostics;
  /// Levels that are predicted without a known boundary problem behind them.
  bool prediction_only = false;
};

/// Central ray -(2n-1) pi / (2(2n+3)) + 2 pi m / (2n+3) of the m-th discrete wedge of the odd potential.
double discrete_wedge_center(int n, int m);

}  // namespace cryptospec
