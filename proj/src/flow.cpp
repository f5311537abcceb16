#include "cryptospec/flow.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "cryptospec/errors.hpp"
#include "cryptospec/parallel.hpp"

namespace cryptospec {

double perturbative_E0(double g) {
  if (!std::isfinite(g) || g < 0.0) throw DomainError("perturbative_E0: g must be >= 0");
  return 0.5 + 449.0 * g * g / 32.0;
}

double FlowCurve::energy_of(std::size_t i, int label) const {
  for (std::size_t j = 0; j < labels.at(i).size(); ++j) {
    if (labels[i][j] == label) return levels[i][j];
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

std::vector<double> levels_at(int n, const Ray& ray, double g, double e_lo, double e_hi, double step,
                              const ShootingParams& params) {
  const PotentialSpec spec = PotentialSpec::mixed(n, g);
  ShootingParams p = params;
  if (p.s_max == 0.0) p.s_max = auto_s_max(spec, ray, e_hi, p.wkb_exponent);
  return scan_roots(spec, ray, e_lo, e_hi, step, p).roots;
}

void require_discrete(int n, double alpha) {
  const SectorClass cls = classify_ray(PotentialSpec::mixed(n, 1.0), alpha);
  if (cls.kind != SectorKind::discrete) {
    throw DomainError("ray alpha = " + std::to_string(alpha) + " is not in a discrete sector (" + cls.name() + ")");
  }
}

struct Pairing {
  std::vector<int> link;           // per level of A: index in B or -1
  std::vector<bool> b_used;
  std::vector<std::vector<int>> vanished;  // groups of consecutive unpaired interior levels of A
  bool odd = false;
};

Pairing pair_levels(const std::vector<double>& a, const std::vector<double>& b, double e_lo, double e_hi) {
  Pairing out;
  out.link.assign(a.size(), -1);
  out.b_used.assign(b.size(), false);
  auto nearest = [](const std::vector<double>& v, double x) {
    int best = -1;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (best < 0 || std::abs(v[k] - x) < std::abs(v[static_cast<std::size_t>(best)] - x)) best = static_cast<int>(k);
    }
    return best;
  };
  for (std::size_t j = 0; j < a.size(); ++j) {
    const int k = nearest(b, a[j]);
    if (k < 0 || nearest(a, b[static_cast<std::size_t>(k)]) != static_cast<int>(j)) continue;
    double spacing = e_hi - e_lo;
    if (j > 0) spacing = std::min(spacing, a[j] - a[j - 1]);
    if (j + 1 < a.size()) spacing = std::min(spacing, a[j + 1] - a[j]);
    if (std::abs(b[static_cast<std::size_t>(k)] - a[j]) <= 3.0 * spacing) {
      out.link[j] = k;
      out.b_used[static_cast<std::size_t>(k)] = true;
    }
  }
  // Unpaired levels of A that are not at the window edges must vanish in pairs.
  const double top_edge = e_hi - 0.1 * (e_hi - e_lo);
  std::vector<int> group;
  auto flush = [&] {
    if (group.empty()) return;
    if (group.size() % 2 != 0) out.odd = true;
    out.vanished.push_back(group);
    group.clear();
  };
  for (std::size_t j = 0; j < a.size(); ++j) {
    const bool at_edge = a[j] > top_edge || a[j] < e_lo + 0.02;
    if (out.link[j] < 0 && !at_edge) {
      group.push_back(static_cast<int>(j));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

}  // namespace

FlowCurve spectral_flow(int n, double alpha, double g_from, double g_to, int n_levels, const FlowOptions& options) {
  if (n < 1) throw DomainError("spectral_flow: n must be >= 1");
  if (!(g_from > g_to && g_to > 0.0)) throw DomainError("spectral_flow: need g_from > g_to > 0");
  if (n_levels < 1) throw DomainError("spectral_flow: n_levels must be >= 1");
  if (!(options.ratio > 0.0 && options.ratio < 1.0)) throw DomainError("spectral_flow: ratio must lie in (0, 1)");
  options.shooting.validate();
  require_discrete(n, alpha);

  FlowCurve curve;
  curve.spec = PotentialSpec::mixed(n, g_from);
  curve.ray = Ray::at(alpha);
  const double e_lo = options.e_floor;

  // Energy window holding the lowest n_levels levels at g_from, with headroom.
  double e_max = 2.0;
  std::vector<double> first;
  for (;;) {
    first = levels_at(n, curve.ray, g_from, e_lo, e_max, options.e_step, options.shooting);
    if (static_cast<int>(first.size()) > n_levels) break;
    e_max *= 1.5;
    if (e_max > 1e3) throw NumericalError("spectral_flow: could not find the requested number of levels");
  }
  const double cut = 0.5 * (first[static_cast<std::size_t>(n_levels - 1)] + first[static_cast<std::size_t>(n_levels)]);
  curve.e_ceiling = cut + 0.25 * (cut - e_lo);

  std::vector<double> gs;
  for (double g = g_from; g > g_to; g *= options.ratio) gs.push_back(g);
  gs.push_back(g_to);

  auto compute = [&](double g) { return levels_at(n, curve.ray, g, e_lo, curve.e_ceiling, options.e_step, options.shooting); };
  std::vector<std::vector<double>> lv = parallel_map<std::vector<double>>(gs.size(), [&](std::size_t i) { return compute(gs[i]); });

  // Pair adjacent grid points, inserting intermediate couplings where the pairing is inconsistent.
  std::vector<Pairing> pairings;
  std::vector<int> refinements(gs.size(), 0);
  for (std::size_t i = 0; i + 1 < gs.size();) {
    Pairing pr = pair_levels(lv[i], lv[i + 1], e_lo, curve.e_ceiling);
    if (pr.odd) {
      if (refinements[i] >= options.max_refinements) {
        std::ostringstream msg;
        msg << "spectral_flow: level count changes by an odd number between g = " << gs[i] << " and g = " << gs[i + 1]
            << " even after refinement; grid too coarse";
        throw NumericalError(msg.str());
      }
      const double mid = std::sqrt(gs[i] * gs[i + 1]);
      gs.insert(gs.begin() + static_cast<long>(i) + 1, mid);
      lv.insert(lv.begin() + static_cast<long>(i) + 1, compute(mid));
      refinements.insert(refinements.begin() + static_cast<long>(i) + 1, refinements[i] + 1);
      ++refinements[i];
      continue;
    }
    pairings.push_back(std::move(pr));
    ++i;
  }

  curve.g_values = gs;
  curve.levels = lv;
  curve.labels.resize(gs.size());
  curve.links.resize(gs.size());
  int next_label = 0;
  for (std::size_t j = 0; j < lv[0].size(); ++j) curve.labels[0].push_back(next_label++);
  for (std::size_t i = 0; i + 1 < gs.size(); ++i) {
    const Pairing& pr = pairings[i];
    curve.links[i] = pr.link;
    curve.labels[i + 1].assign(lv[i + 1].size(), -1);
    for (std::size_t j = 0; j < pr.link.size(); ++j) {
      if (pr.link[j] >= 0) curve.labels[i + 1][static_cast<std::size_t>(pr.link[j])] = curve.labels[i][j];
    }
    for (int& label : curve.labels[i + 1]) {
      if (label < 0) label = next_label++;
    }
    for (const auto& group : pr.vanished) {
      for (std::size_t k = 0; k + 1 < group.size(); k += 2) {
        const auto lo = static_cast<std::size_t>(group[k]);
        const auto hi = static_cast<std::size_t>(group[k + 1]);
        curve.coalescences.push_back({i, curve.labels[i][lo], curve.labels[i][hi], 0.5 * (lv[i][lo] + lv[i][hi])});
      }
    }
  }
  curve.links.back().assign(lv.back().size(), -1);
  return curve;
}

namespace {

struct WindowProbe {
  int roots = 0;          // 0 or 2
  double lower = 0.0;     // the two roots (valid when roots == 2)
  double upper = 0.0;
  double extremum = 0.0;  // location of the extremum of D between the roots / closest approach
  double extremum_value = 0.0;
  double scale = 0.0;     // max |D| on the window grid
};

class PairWindow {
 public:
  PairWindow(int n, Ray ray, ShootingParams params) : n_(n), ray_(ray), params_(params) {}

  WindowProbe probe(double g, double lo, double hi) const {
    const PotentialSpec spec = PotentialSpec::mixed(n_, g);
    constexpr int points = 41;
    std::vector<double> es(points);
    for (int k = 0; k < points; ++k) es[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (points - 1);
    const std::vector<double> ds =
        parallel_map<double>(es.size(), [&](std::size_t k) { return shoot_mismatch(spec, ray_, es[k], params_); });

    WindowProbe out;
    std::vector<std::size_t> changes;
    for (std::size_t k = 0; k + 1 < ds.size(); ++k) {
      out.scale = std::max(out.scale, std::abs(ds[k]));
      if (ds[k] * ds[k + 1] < 0.0) changes.push_back(k);
    }
    out.scale = std::max(out.scale, std::abs(ds.back()));
    if (changes.size() != 0 && changes.size() != 2) {
      std::ostringstream msg;
      msg << "find_exceptional_point: " << changes.size() << " sign changes in the window [" << lo << ", " << hi
          << "] at g = " << g << "; the window is contaminated by another level";
      throw ConsistencyError(msg.str());
    }
    const double sigma = ds.front() >= 0.0 ? 1.0 : -1.0;
    auto f = [&](double E) { return sigma * shoot_mismatch(spec, ray_, E, params_); };

    std::size_t a = 0, b = ds.size() - 1;
    if (changes.size() == 2) {
      a = changes[0];
      b = changes[1] + 1;
    } else {
      std::size_t best = 0;
      for (std::size_t k = 0; k < ds.size(); ++k) {
        if (sigma * ds[k] < sigma * ds[best]) best = k;
      }
      a = best > 0 ? best - 1 : 0;
      b = std::min(ds.size() - 1, best + 1);
    }
    const auto m = boost::math::tools::brent_find_minima(f, es[a], es[b], 40);
    out.extremum = m.first;
    out.extremum_value = sigma * m.second;
    if (changes.size() == 2 || m.second < 0.0) {
      out.roots = 2;
      if (changes.size() == 2) {
        out.lower = 0.5 * (es[changes[0]] + es[changes[0] + 1]);
        out.upper = 0.5 * (es[changes[1]] + es[changes[1] + 1]);
      } else {
        out.lower = out.upper = out.extremum;
      }
    }
    return out;
  }

 private:
  int n_;
  Ray ray_;
  ShootingParams params_;
};

}  // namespace

ExceptionalPoint find_exceptional_point(int n, double alpha, std::pair<int, int> pair,
                                        std::pair<double, double> g_bracket, const EpOptions& options) {
  const auto [i, j] = pair;
  if (i < 0 || j != i + 1) throw DomainError("find_exceptional_point: the pair must be two adjacent level indices");
  const auto [g_lo, g_hi] = g_bracket;
  if (!(g_hi > g_lo && g_lo > 0.0)) throw DomainError("find_exceptional_point: need g_hi > g_lo > 0");
  if (!(options.rel_tol > 0.0 && options.rel_tol < 0.1)) throw DomainError("find_exceptional_point: bad rel_tol");
  options.shooting.validate();
  require_discrete(n, alpha);
  const Ray ray = Ray::at(alpha);

  // Levels at the upper end of the bracket.
  std::vector<double> levels;
  for (double e_max = 2.0;; e_max *= 1.5) {
    levels = levels_at(n, ray, g_hi, 0.05, e_max, 0.01, options.shooting);
    if (static_cast<int>(levels.size()) > j + 1) break;
    if (e_max > 1e3) throw DomainError("find_exceptional_point: level index out of range at g_hi");
  }
  double lower = levels[static_cast<std::size_t>(i)];
  double upper = levels[static_cast<std::size_t>(j)];
  const double below = i > 0 ? levels[static_cast<std::size_t>(i - 1)] : 0.0;
  const double above = levels[static_cast<std::size_t>(j + 1)];
  // Tight window around the pair: neighbouring levels must stay outside while the pair is tracked.
  auto margin_for = [](double lo_root, double hi_root) { return 0.25 * (hi_root - lo_root) + 0.03; };
  double margin = std::min({0.4 * (lower - below), 0.4 * (above - upper), margin_for(lower, upper)});

  const PairWindow window(n, ray, options.shooting);
  auto bounds = [&](double lo_root, double hi_root) {
    return std::pair<double, double>{lo_root - margin, hi_root + margin};
  };

  // March down from g_hi while the pair is present, keeping the window centred on it.
  double g_two = g_hi;
  double g_none = -1.0;
  auto [w_lo, w_hi] = bounds(lower, upper);
  WindowProbe last = window.probe(g_hi, w_lo, w_hi);
  if (last.roots != 2) throw ConsistencyError("find_exceptional_point: pair not resolved in its window at g_hi");
  for (double g = g_hi * options.march_ratio;; g *= options.march_ratio) {
    g = std::max(g, g_lo);
    const WindowProbe pr = window.probe(g, w_lo, w_hi);
    if (pr.roots == 2) {
      g_two = g;
      last = pr;
      margin = std::min(margin, margin_for(pr.lower, pr.upper));
      std::tie(w_lo, w_hi) = bounds(pr.lower, pr.upper);
      if (g == g_lo) {
        throw DomainError("find_exceptional_point: the pair is still real at g_lo; the bracket holds no coalescence");
      }
    } else {
      g_none = g;
      break;
    }
  }

  // Bisection on the root-count predicate.
  while ((g_two - g_none) > options.rel_tol * g_two) {
    const double g = 0.5 * (g_two + g_none);
    const WindowProbe pr = window.probe(g, w_lo, w_hi);
    if (pr.roots == 2) {
      g_two = g;
      last = pr;
    } else {
      g_none = g;
    }
  }

  ExceptionalPoint ep;
  ep.pair = pair;
  ep.g_lo = g_none;
  ep.g_hi = g_two;
  ep.g_star = 0.5 * (g_two + g_none);
  const WindowProbe at_star = window.probe(ep.g_star, w_lo, w_hi);
  ep.E_star = at_star.extremum;
  ep.double_root_residual = std::abs(at_star.extremum_value) / std::max(at_star.scale, 1e-300);

  // The dichotomy must hold on both sides of the coalescence.
  const double w = 0.02;
  const bool above_ok = window.probe(ep.g_star * (1.0 + w), w_lo, w_hi).roots == 2;
  const bool below_ok = window.probe(ep.g_star * (1.0 - w), w_lo, w_hi).roots == 0;
  if (!above_ok || !below_ok) {
    throw ConsistencyError("find_exceptional_point: root-count predicate is not monotone around g*");
  }
  return ep;
}

}  // namespace cryptospec
