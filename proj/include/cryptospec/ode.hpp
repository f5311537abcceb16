#pragma once
// Dormand-Prince 8(5,3) integrator with step-size control (Hairer's DOP853 scheme)
// on fixed-size real state vectors.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

namespace cryptospec {

enum class OdeStatus { completed, stopped, step_underflow, too_many_steps };

template <std::size_t N>
class Dop853 {
 public:
  using State = std::array<double, N>;
  using Rhs = std::function<State(double, const State&)>;
  /// Called after every accepted step with the new time, state and derivative.
  /// Returning false stops the integration.
  using Observer = std::function<bool(double, const State&, const State&)>;

  struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;  // 0: automatic
    double h_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 5'000'000;
  };

  Dop853(Rhs rhs, Options options) : rhs_(std::move(rhs)), opt_(options) {}

  /// One step of length h without error control.
  State advance(double t, const State& y, const State& f, double h) const {
    State out{};
    State err{};
    step(t, y, f, h, out, err);
    return out;
  }

  /// Integrates from t to t_end (either direction), updating t and y in place.
  OdeStatus run(double& t, State& y, double t_end, const Observer& observer = {}) {
    constexpr double safe = 0.9, fac1 = 0.333, fac2 = 6.0, expo = 1.0 / 8.0;
    constexpr double uround = std::numeric_limits<double>::epsilon();
    const double dir = t_end >= t ? 1.0 : -1.0;
    const double span = std::abs(t_end - t);
    if (span == 0.0) return OdeStatus::completed;
    const double h_max = std::min(opt_.h_max, span);

    State f = rhs_(t, y);
    double h = opt_.h_init > 0.0 ? std::min(opt_.h_init, h_max) : initial_step(t, y, f, h_max, dir);
    h *= dir;
    bool reject = false;
    steps_ = 0;

    State y_new{}, err{};
    while (true) {
      if (++steps_ > opt_.max_steps) return OdeStatus::too_many_steps;
      if (0.1 * std::abs(h) <= std::abs(t) * uround || std::abs(h) < 1e-300) return OdeStatus::step_underflow;
      bool last = false;
      if ((t + 1.01 * h - t_end) * dir > 0.0) {
        h = t_end - t;
        last = true;
      }

      step(t, y, f, h, y_new, err);
      const double e = error_norm(y, y_new, err, f, h);

      if (std::isfinite(e) && e <= 1.0) {
        const double fac = std::clamp(std::pow(e, expo) / safe, 1.0 / fac2, 1.0 / fac1);
        double h_new = h / fac;
        t = last ? t_end : t + h;
        y = y_new;
        f = rhs_(t, y);
        if (observer && !observer(t, y, f)) return OdeStatus::stopped;
        if (last) return OdeStatus::completed;
        if (std::abs(h_new) > h_max) h_new = dir * h_max;
        if (reject) h_new = dir * std::min(std::abs(h_new), std::abs(h));
        reject = false;
        h = h_new;
      } else {
        const double fac = std::isfinite(e) ? std::min(1.0 / fac1, std::pow(e, expo) / safe) : 10.0;
        h /= fac;
        reject = true;
      }
    }
  }

  [[nodiscard]] std::size_t steps() const { return steps_; }

 private:
  double initial_step(double t, const State& y, const State& f, double h_max, double dir) const {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt_.atol + opt_.rtol * std::abs(y[i]);
      dnf += (f[i] / sk) * (f[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, h_max);
    State y1{};
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + dir * h * f[i];
    const State f1 = rhs_(t + dir * h, y1);
    double der2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt_.atol + opt_.rtol * std::abs(y[i]);
      der2 += ((f1[i] - f[i]) / sk) * ((f1[i] - f[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 1.0 / 8.0);
    return std::min({100.0 * h, h1, h_max});
  }

  double error_norm(const State& y, const State& y_new, const State& err_parts, const State& f, double h) const {
    (void)f;
    double err = 0.0, err2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      if (!std::isfinite(y_new[i])) return std::numeric_limits<double>::infinity();
      const double sk = 1.0 / (opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i])));
      err += (err_parts[i] * sk) * (err_parts[i] * sk);
      err2 += (err3_[i] * sk) * (err3_[i] * sk);
    }
    double deno = err + 0.01 * err2;
    if (deno <= 0.0) deno = 1.0;
    return std::abs(h) * err * std::sqrt(1.0 / (deno * static_cast<double>(N)));
  }

  void step(double t, const State& y, const State& k1, double h, State& out, State& err5) const {
    constexpr double c2 = 0.526001519587677318785587544488E-01, c3 = 0.789002279381515978178381316732E-01,
                     c4 = 0.118350341907227396726757197510E+00, c5 = 0.281649658092772603273242802490E+00,
                     c6 = 0.333333333333333333333333333333E+00, c7 = 0.25E+00,
                     c8 = 0.307692307692307692307692307692E+00, c9 = 0.651282051282051282051282051282E+00,
                     c10 = 0.6E+00, c11 = 0.857142857142857142857142857142E+00;
    constexpr double b1 = 5.42937341165687622380535766363E-2, b6 = 4.45031289275240888144113950566E0,
                     b7 = 1.89151789931450038304281599044E0, b8 = -5.8012039600105847814672114227E0,
                     b9 = 3.1116436695781989440891606237E-1, b10 = -1.52160949662516078556178806805E-1,
                     b11 = 2.01365400804030348374776537501E-1, b12 = 4.47106157277725905176885569043E-2;
    constexpr double a21 = 5.26001519587677318785587544488E-2, a31 = 1.97250569845378994544595329183E-2,
                     a32 = 5.91751709536136983633785987549E-2, a41 = 2.95875854768068491816892993775E-2,
                     a43 = 8.87627564304205475450678981324E-2, a51 = 2.41365134159266685502369798665E-1,
                     a53 = -8.84549479328286085344864962717E-1, a54 = 9.24834003261792003115737966543E-1,
                     a61 = 3.7037037037037037037037037037E-2, a64 = 1.70828608729473871279604482173E-1,
                     a65 = 1.25467687566822425016691814123E-1, a71 = 3.7109375E-2,
                     a74 = 1.70252211019544039314978060272E-1, a75 = 6.02165389804559606850219397283E-2,
                     a76 = -1.7578125E-2, a81 = 3.70920001185047927108779319836E-2,
                     a84 = 1.70383925712239993810214054705E-1, a85 = 1.07262030446373284651809199168E-1,
                     a86 = -1.53194377486244017527936158236E-2, a87 = 8.27378916381402288758473766002E-3,
                     a91 = 6.24110958716075717114429577812E-1, a94 = -3.36089262944694129406857109825E0,
                     a95 = -8.68219346841726006818189891453E-1, a96 = 2.75920996994467083049415600797E1,
                     a97 = 2.01540675504778934086186788979E1, a98 = -4.34898841810699588477366255144E1,
                     a101 = 4.77662536438264365890433908527E-1, a104 = -2.48811461997166764192642586468E0,
                     a105 = -5.90290826836842996371446475743E-1, a106 = 2.12300514481811942347288949897E1,
                     a107 = 1.52792336328824235832596922938E1, a108 = -3.32882109689848629194453265587E1,
                     a109 = -2.03312017085086261358222928593E-2, a111 = -9.3714243008598732571704021658E-1,
                     a114 = 5.18637242884406370830023853209E0, a115 = 1.09143734899672957818500254654E0,
                     a116 = -8.14978701074692612513997267357E0, a117 = -1.85200656599969598641566180701E1,
                     a118 = 2.27394870993505042818970056734E1, a119 = 2.49360555267965238987089396762E0,
                     a1110 = -3.0467644718982195003823669022E0, a121 = 2.27331014751653820792359768449E0,
                     a124 = -1.05344954667372501984066689879E1, a125 = -2.00087205822486249909675718444E0,
                     a126 = -1.79589318631187989172765950534E1, a127 = 2.79488845294199600508499808837E1,
                     a128 = -2.85899827713502369474065508674E0, a129 = -8.87285693353062954433549289258E0,
                     a1210 = 1.23605671757943030647266201528E1, a1211 = 6.43392746015763530355970484046E-1;
    constexpr double bhh1 = 0.244094488188976377952755905512E+00, bhh2 = 0.733846688281611857341361741547E+00,
                     bhh3 = 0.220588235294117647058823529412E-01;
    constexpr double er1 = 0.1312004499419488073250102996E-01, er6 = -0.1225156446376204440720569753E+01,
                     er7 = -0.4957589496572501915214079952E+00, er8 = 0.1664377182454986536961530415E+01,
                     er9 = -0.3503288487499736816886487290E+00, er10 = 0.3341791187130174790297318841E+00,
                     er11 = 0.8192320648511571246570742613E-01, er12 = -0.2235530786388629525884427845E-01;

    State w{};
    auto stage = [&](double c, auto&& combine) {
      for (std::size_t i = 0; i < N; ++i) w[i] = y[i] + h * combine(i);
      return rhs_(t + c * h, w);
    };
    const State k2 = stage(c2, [&](std::size_t i) { return a21 * k1[i]; });
    const State k3 = stage(c3, [&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
    const State k4 = stage(c4, [&](std::size_t i) { return a41 * k1[i] + a43 * k3[i]; });
    const State k5 = stage(c5, [&](std::size_t i) { return a51 * k1[i] + a53 * k3[i] + a54 * k4[i]; });
    const State k6 = stage(c6, [&](std::size_t i) { return a61 * k1[i] + a64 * k4[i] + a65 * k5[i]; });
    const State k7 =
        stage(c7, [&](std::size_t i) { return a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]; });
    const State k8 = stage(c8, [&](std::size_t i) {
      return a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i];
    });
    const State k9 = stage(c9, [&](std::size_t i) {
      return a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] + a97 * k7[i] + a98 * k8[i];
    });
    const State k10 = stage(c10, [&](std::size_t i) {
      return a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] + a107 * k7[i] + a108 * k8[i] +
             a109 * k9[i];
    });
    const State k11 = stage(c11, [&](std::size_t i) {
      return a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] + a117 * k7[i] + a118 * k8[i] +
             a119 * k9[i] + a1110 * k10[i];
    });
    const State k12 = stage(1.0, [&](std::size_t i) {
      return a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] + a127 * k7[i] + a128 * k8[i] +
             a129 * k9[i] + a1210 * k10[i] + a1211 * k11[i];
    });
    for (std::size_t i = 0; i < N; ++i) {
      const double slope = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] + b10 * k10[i] +
                           b11 * k11[i] + b12 * k12[i];
      out[i] = y[i] + h * slope;
      err3_[i] = slope - bhh1 * k1[i] - bhh2 * k9[i] - bhh3 * k12[i];
      err5[i] = er1 * k1[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i] + er9 * k9[i] + er10 * k10[i] +
                er11 * k11[i] + er12 * k12[i];
    }
  }

  Rhs rhs_;
  Options opt_;
  mutable State err3_{};
  std::size_t steps_ = 0;
};

}  // namespace cryptospec
