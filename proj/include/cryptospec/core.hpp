#pragma once
// Potentials of the form [z^2/2] - g (iz)^N on the complexified phase space,
// their real/imaginary split, turning points and Stokes-asymptote geometry.

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace cryptospec {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

enum class Parity { odd, even };

/// Which Hamiltonian family: pi^2/2 + [z^2/2] - g (iz)^(2n+1)   (odd)
///                        or pi^2/2 + [z^2/2] - g (iz)^(2n)     (even, sector counting only).
struct PotentialSpec {
  int n = 1;
  double g = 1.0;
  bool oscillator = false;
  Parity parity = Parity::odd;

  static PotentialSpec pure(int n) { return {n, 1.0, false, Parity::odd}; }
  static PotentialSpec mixed(int n, double g) { return {n, g, true, Parity::odd}; }
  static PotentialSpec harmonic() { return {1, 0.0, true, Parity::odd}; }
  static PotentialSpec even_power(int n) { return {n, 1.0, false, Parity::even}; }

  /// Exponent of the (iz)^k term: 2n+1 or 2n.
  [[nodiscard]] int power() const { return parity == Parity::odd ? 2 * n + 1 : 2 * n; }
  /// Power that dominates at large |z| (2 when only the oscillator term is present).
  [[nodiscard]] int leading_power() const { return g > 0.0 ? power() : 2; }
  [[nodiscard]] bool is_pure() const { return !oscillator; }

  /// Throws DomainError when the invariants are violated.
  void validate() const;
  /// Throws DomainError unless parity is odd (only odd potentials have dynamics here).
  void require_odd(std::string_view operation) const;
  void require_pure(std::string_view operation) const;

  friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;
};

/// z = x + iy, pi = p - iq.
struct PhasePoint {
  double x = 0.0;
  double y = 0.0;
  double p = 0.0;
  double q = 0.0;

  [[nodiscard]] cplx z() const { return {x, y}; }
  [[nodiscard]] cplx pi() const { return {p, -q}; }
  [[nodiscard]] bool finite() const;
  [[nodiscard]] double norm() const;

  static PhasePoint from_complex(cplx z, cplx pi) { return {z.real(), z.imag(), pi.real(), -pi.imag()}; }

  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

double distance(const PhasePoint& a, const PhasePoint& b);

/// Real and imaginary parts of the complex Hamiltonian pi^2/2 + V(z).
struct HGValue {
  double H = 0.0;
  double G = 0.0;
};

struct TurningPointSet {
  double energy = 0.0;
  std::vector<cplx> points;  // sorted by argument in (-pi, pi]
};

/// (iz)^k by repeated multiplication.
cplx ipow(cplx w, int k);

cplx eval_potential(const PotentialSpec& spec, cplx z);
cplx potential_derivative(const PotentialSpec& spec, cplx z);

HGValue split_hg(const PotentialSpec& spec, const PhasePoint& pt);

/// Hamilton vector field of H: (dx/dt, dy/dt, dp/dt, dq/dt).
PhasePoint hamilton_field(const PotentialSpec& spec, const PhasePoint& pt);

/// Vector field generated by the constraint G (imaginary time shift z(t) -> z(t - i alpha)).
PhasePoint constraint_field(const PotentialSpec& spec, const PhasePoint& pt);

TurningPointSet turning_points(const PotentialSpec& spec, double E);

/// Directions of the asymptotes of the Stokes lines, sorted in (-pi, pi].
std::vector<double> stokes_asymptotes(const PotentialSpec& spec);

/// Half-width pi/(N+2) of every wedge between consecutive asymptotes.
double wedge_half_width(const PotentialSpec& spec);

/// Reduce an angle to (-pi, pi].
double wrap_angle(double a);

// ---------------------------------------------------------------------------
// Families of closed classical orbits of the pure odd potential.

enum class EnergySign { positive, negative };

/// pos-m / neg-m, m = 0..n-1, ordered by the argument of the right turning point.
struct FamilyId {
  EnergySign sign = EnergySign::positive;
  int m = 0;

  static FamilyId pos(int m) { return {EnergySign::positive, m}; }
  static FamilyId neg(int m) { return {EnergySign::negative, m}; }

  /// Accepts "pos-0", "neg-1", and for n = 2 the names "pos-up", "pos-down", "neg-up", "neg-down".
  static FamilyId parse(std::string_view text, int n);
  [[nodiscard]] std::string name() const;
  [[nodiscard]] double sign_value() const { return sign == EnergySign::positive ? 1.0 : -1.0; }

  friend bool operator==(const FamilyId&, const FamilyId&) = default;
};

void validate_family(const PotentialSpec& spec, FamilyId family, double E);

/// One straight segment of the star-shaped deformed contour: origin -> point.
struct ContourPiece {
  cplx point;
  int multiplicity = 1;
};

/// Turning-point geometry of one family at energy E.
/// The action is S = 4 r sqrt(2|E|) J_n * factor with r = |E/g|^{1/(2n+1)} and
/// J_n = int_0^1 sqrt(1 - s^{2n+1}) ds.
struct FamilyGeometry {
  FamilyId family;
  double energy = 0.0;
  cplx right;
  cplx left;
  std::vector<ContourPiece> pieces;
  double factor = 0.0;
};

FamilyGeometry family_geometry(const PotentialSpec& spec, FamilyId family, double E);

/// J_n = int_0^1 sqrt(1 - s^{2n+1}) ds = sqrt(pi) Gamma(1 + 1/N) / (2 Gamma(3/2 + 1/N)).
double unit_segment_integral(int n);

/// dS/dE of the family, i.e. the classical period of every orbit in it.
double family_period(const PotentialSpec& spec, FamilyId family, double E);

}  // namespace cryptospec
