#include "caputo/mechanics.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace caputo {

namespace {

constexpr double kPi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

Mat3 Mat3::identity() {
  Mat3 m;
  m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
  return m;
}

Mat3 Mat3::transposed() const {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = (*this)(j, i);
  return m;
}

double Mat3::det() const {
  const Mat3& m = *this;
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

Mat3 operator*(const Mat3& x, const Mat3& y) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += x(i, k) * y(k, j);
      m(i, j) = acc;
    }
  return m;
}

Sym3 Sym3::identity() {
  Sym3 s;
  s.v = {1.0, 1.0, 1.0, 0.0, 0.0, 0.0};
  return s;
}

Mat3 Sym3::full() const {
  Mat3 m;
  m(0, 0) = v[0];
  m(1, 1) = v[1];
  m(2, 2) = v[2];
  m(0, 1) = m(1, 0) = v[3];
  m(0, 2) = m(2, 0) = v[4];
  m(1, 2) = m(2, 1) = v[5];
  return m;
}

Sym3 Sym3::from_full_symmetric(const Mat3& m) {
  Sym3 s;
  s.v = {m(0, 0), m(1, 1), m(2, 2), 0.5 * (m(0, 1) + m(1, 0)),
         0.5 * (m(0, 2) + m(2, 0)), 0.5 * (m(1, 2) + m(2, 1))};
  return s;
}

double ddot(const Sym3& x, const Sym3& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] +
         2.0 * (x[3] * y[3] + x[4] * y[4] + x[5] * y[5]);
}

Sym3 sym_inverse(const Sym3& c) {
  const Mat3 m = c.full();
  const double d = m.det();
  if (d == 0.0) throw std::runtime_error("sym_inverse: singular tensor");
  Mat3 inv;
  inv(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / d;
  inv(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / d;
  inv(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / d;
  inv(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / d;
  inv(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / d;
  inv(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / d;
  inv(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / d;
  inv(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / d;
  inv(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / d;
  return Sym3::from_full_symmetric(inv);
}

double LiverModel::lambda(double t) const {
  return 1.0 - compression * std::min(t, 1.0);
}

double LiverModel::shear_time(double t) const { return std::max(0.0, t - 1.0); }

double LiverModel::psi(double t) const {
  const double l = lambda(t);
  return gamma_s * l * std::sqrt(l) * std::sin(2.0 * kPi * f_hz * shear_time(t)) /
         radius;
}

Vec3 deformed_position(const Vec3& X, double t, const LiverModel& model) {
  const double l = model.lambda(t);
  const double sl = std::sqrt(l);
  const double theta = model.psi(t) * X[2];
  const double c = std::cos(theta), s = std::sin(theta);
  return {(X[0] * c - X[1] * s) / sl, (X[0] * s + X[1] * c) / sl, l * X[2]};
}

KinematicState deformation(const Vec3& X, double t, const LiverModel& model) {
  const double r2 = X[0] * X[0] + X[1] * X[1];
  const double rtol = 1e-12 * model.radius;
  if (t < 0.0) throw std::invalid_argument("deformation: t must be >= 0");
  if (r2 > (model.radius + rtol) * (model.radius + rtol) || X[2] < -rtol ||
      X[2] > model.height + rtol)
    throw std::invalid_argument("deformation: point outside the reference cylinder");

  const double l = model.lambda(t);
  const double sl = std::sqrt(l);
  const double psi = model.psi(t);
  const double theta = psi * X[2];
  const double c = std::cos(theta), s = std::sin(theta);

  KinematicState kin;
  const Vec3 x = deformed_position(X, t, model);
  kin.u = {x[0] - X[0], x[1] - X[1], x[2] - X[2]};

  Mat3& F = kin.F;
  F(0, 0) = c / sl;
  F(0, 1) = -s / sl;
  F(0, 2) = psi * (-X[0] * s - X[1] * c) / sl;
  F(1, 0) = s / sl;
  F(1, 1) = c / sl;
  F(1, 2) = psi * (X[0] * c - X[1] * s) / sl;
  F(2, 0) = 0.0;
  F(2, 1) = 0.0;
  F(2, 2) = l;

  kin.C = Sym3::from_full_symmetric(F.transposed() * F);
  kin.J = F.det();
  return kin;
}

Sym3 viscous_branch(const Sym3& C, const LiverModel& model) {
  const double sec = ddot(C, C);  // II_C = C : C
  const double w = std::exp(model.b * (sec - 3.0));
  Sym3 s = C;
  for (int i = 0; i < 6; ++i) s[i] *= w;
  return s;
}

Sym3 deviatoric(const Sym3& a, const Sym3& c) {
  const Sym3 cinv = sym_inverse(c);
  const double f = ddot(a, c) / 3.0;
  Sym3 out = a;
  for (int i = 0; i < 6; ++i) out[i] -= f * cinv[i];
  return out;
}

StressEngine parse_engine(const std::string& name) {
  if (name == "prony") return StressEngine::prony;
  if (name == "gl") return StressEngine::gl;
  if (name == "mp") return StressEngine::mp;
  if (name == "hyperelastic") return StressEngine::hyperelastic;
  throw std::invalid_argument("unknown stress engine: " + name);
}

namespace {

Sym3 push_forward(const Mat3& F, const Sym3& S) {
  // sigma = F S F^T (J = 1 for this deformation).
  return Sym3::from_full_symmetric(F * S.full() * F.transposed());
}

}  // namespace

StressHistory stress_history(const Vec3& X, const LiverModel& model,
                             StressEngine engine, const UniformGrid& grid,
                             const PronySeries* series, int output_every) {
  if (output_every < 1)
    throw std::invalid_argument("stress_history: output_every must be >= 1");
  if (engine == StressEngine::prony) {
    if (series == nullptr)
      throw std::invalid_argument("stress_history: prony engine needs a series");
    if (std::abs(series->denormalized().alpha - model.alpha) > 1e-9)
      throw std::invalid_argument("stress_history: series alpha mismatch");
  }

  const int steps = grid.steps;
  const double dt = grid.dt;
  const double a = model.alpha;

  StressHistory out;
  const auto t0 = Clock::now();

  // S_v along the prescribed deformation; kept per fine step for the
  // cumulative engines, streamed for the recursive one.
  auto sv_at = [&](int n) {
    const KinematicState kin = deformation(X, grid.time(n), model);
    return std::pair<Sym3, KinematicState>(viscous_branch(kin.C, model), kin);
  };

  auto record = [&](int n, const Sym3& frac, const KinematicState& kin) {
    Sym3 dev = deviatoric(frac, kin.C);
    for (int i = 0; i < 6; ++i) dev[i] *= model.delta;
    out.times.push_back(grid.time(n));
    out.S.push_back(dev);
    out.sigma.push_back(push_forward(kin.F, dev));
  };

  if (engine == StressEngine::prony) {
    PronyState state(*series, 6, dt);
    auto [sv0, kin0] = sv_at(0);
    state.seed(std::span<const double>(sv0.v.data(), 6));
    record(0, Sym3{}, kin0);
    Sym3 frac;
    for (int n = 1; n <= steps; ++n) {
      auto [sv, kin] = sv_at(n);
      state.advance(std::span<const double>(sv.v.data(), 6),
                    std::span<double>(frac.v.data(), 6));
      if (n % output_every == 0 || n == steps) record(n, frac, kin);
    }
    out.ops = state.ops();
  } else if (engine == StressEngine::hyperelastic) {
    for (int n = 0; n <= steps; ++n) {
      if (n % output_every != 0 && n != steps && n != 0) continue;
      auto [sv, kin] = sv_at(n);
      record(n, sv, kin);
    }
  } else {
    // Cumulative engines: precompute the S_v history once, then evaluate the
    // full sum only at the recorded times.
    std::vector<Sym3> sv(steps + 1);
    std::vector<KinematicState> kin_at_out;
    for (int n = 0; n <= steps; ++n) sv[n] = sv_at(n).first;

    const double inv_gamma = 1.0 / gamma_fn(1.0 - a);
    std::vector<double> w;
    if (engine == StressEngine::gl) {
      w.assign(steps + 1, 0.0);  // binomial coefficients C_m
      if (steps >= 1) w[1] = a;
      for (int m = 2; m <= steps; ++m) w[m] = w[m - 1] * (1.0 - (a + 1.0) / m);
    } else {
      w.assign(steps + 1, 0.0);  // midpoint kernel weights by history offset
      for (int j = 0; j < steps; ++j) w[j] = std::pow((j + 0.5) * dt, -a);
    }

    record(0, Sym3{}, deformation(X, 0.0, model));
    const double dt_pow = std::pow(dt, -a);
    for (int n = 1; n <= steps; ++n) {
      if (n % output_every != 0 && n != steps) continue;
      Sym3 frac{};
      if (engine == StressEngine::gl) {
        frac = sv[n];
        for (int m = 1; m <= n; ++m) {
          const double cm = w[m];
          const Sym3& f = sv[n - m];
          for (int i = 0; i < 6; ++i) frac[i] -= cm * f[i];
        }
        const double corr = std::pow(grid.time(n), -a) * inv_gamma;
        for (int i = 0; i < 6; ++i)
          frac[i] = dt_pow * frac[i] - corr * sv[0][i];
      } else {
        for (int i = 1; i <= n; ++i) {
          const double wi = w[n - i];
          for (int c = 0; c < 6; ++c)
            frac[c] += wi * (sv[i][c] - sv[i - 1][c]);
        }
        for (int c = 0; c < 6; ++c) frac[c] *= inv_gamma;
      }
      out.ops += static_cast<std::uint64_t>(n) * 6;
      record(n, frac, deformation(X, grid.time(n), model));
    }
  }
  out.seconds = elapsed(t0);
  return out;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.resize(n);
  weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration from the Chebyshev estimate of the i-th root.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    nodes[i] = xm - xl * x;
    nodes[n - 1 - i] = xm + xl * x;
    weights[i] = 2.0 * xl / ((1.0 - x * x) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

namespace {

// Natural cubic spline with right-to-left exact integration of each piece;
// used for the radial-equilibrium pressure closure.
struct CumulativeSpline {
  std::vector<double> x, y, m;  // knots, values, second derivatives
  std::vector<double> tail;     // tail[i] = int_(x_i)^(x_end) spline

  CumulativeSpline(std::vector<double> xs, std::vector<double> ys)
      : x(std::move(xs)), y(std::move(ys)) {
    const int n = static_cast<int>(x.size());
    m.assign(n, 0.0);
    if (n > 2) {
      std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), rhs(n, 0.0);
      diag[0] = diag[n - 1] = 1.0;
      for (int i = 1; i + 1 < n; ++i) {
        const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
        sub[i] = hl / 6.0;
        diag[i] = (hl + hr) / 3.0;
        sup[i] = hr / 6.0;
        rhs[i] = (y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl;
      }
      for (int i = 1; i < n; ++i) {
        const double f = sub[i] / diag[i - 1];
        diag[i] -= f * sup[i - 1];
        rhs[i] -= f * rhs[i - 1];
      }
      m[n - 1] = rhs[n - 1] / diag[n - 1];
      for (int i = n - 2; i >= 0; --i)
        m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
    }
    tail.assign(n, 0.0);
    for (int i = n - 2; i >= 0; --i)
      tail[i] = tail[i + 1] + piece_integral(i);
  }

  double piece_integral(int i) const {
    const double h = x[i + 1] - x[i];
    return 0.5 * h * (y[i] + y[i + 1]) - h * h * h * (m[i] + m[i + 1]) / 24.0;
  }
};

}  // namespace

TractionHistory torque_and_normal(const LiverModel& model, StressEngine engine,
                                  const UniformGrid& grid, int n_quad,
                                  const PronySeries* series, int output_every) {
  if (n_quad < 8)
    throw std::invalid_argument("torque_and_normal: need n_quad >= 8 radial points");

  std::vector<double> rho, wq;
  gauss_legendre(n_quad, 0.0, model.radius, rho, wq);

  // Stress histories at the radial quadrature points plus the rim (the free
  // lateral surface anchoring the pressure integration).
  std::vector<StressHistory> hist;
  hist.reserve(n_quad + 1);
  for (int j = 0; j < n_quad; ++j)
    hist.push_back(stress_history({rho[j], 0.0, model.height}, model, engine,
                                  grid, series, output_every));
  hist.push_back(stress_history({model.radius, 0.0, model.height}, model,
                                engine, grid, series, output_every));

  const std::size_t n_out = hist[0].times.size();
  TractionHistory trac;
  trac.times = hist[0].times;
  trac.torque.assign(n_out, 0.0);
  trac.normal_force.assign(n_out, 0.0);

  for (std::size_t it = 0; it < n_out; ++it) {
    const double t = trac.times[it];
    const double l = model.lambda(t);
    const double theta_d = model.psi(t) * model.height;
    const double c = std::cos(theta_d), s = std::sin(theta_d);
    const Vec3 er = {c, s, 0.0};
    const Vec3 eth = {-s, c, 0.0};

    // Cylindrical deviatoric components along the radius.
    std::vector<double> s_tz(n_quad + 1), s_zz(n_quad + 1), s_rr(n_quad + 1),
        s_thth(n_quad + 1);
    for (int j = 0; j <= n_quad; ++j) {
      const Mat3 sig = hist[j].sigma[it].full();
      auto quad = [&](const Vec3& p, const Vec3& q) {
        double acc = 0.0;
        for (int i = 0; i < 3; ++i)
          for (int k = 0; k < 3; ++k) acc += p[i] * sig(i, k) * q[k];
        return acc;
      };
      s_rr[j] = quad(er, er);
      s_thth[j] = quad(eth, eth);
      s_tz[j] = quad(eth, {0.0, 0.0, 1.0});
      s_zz[j] = sig(2, 2);
    }

    // Torque: 2 pi int s_tz r^2 dr = 2 pi int s_tz rho^2 / lambda^(3/2) drho.
    double tq = 0.0;
    for (int j = 0; j < n_quad; ++j)
      tq += wq[j] * s_tz[j] * rho[j] * rho[j];
    trac.torque[it] = 2.0 * kPi * tq / (l * std::sqrt(l));

    // Radial equilibrium: sigma_rr(rho) = int_rho^R (s_rr - s_thth) drho'/rho',
    // anchored at sigma_rr(R) = 0; then p = sigma_rr - s_rr^dev.
    std::vector<double> xs(n_quad + 2), ys(n_quad + 2);
    xs[0] = 0.0;
    ys[0] = 0.0;  // (s_rr - s_thth)/rho -> 0 on the axis by symmetry
    for (int j = 0; j < n_quad; ++j) {
      xs[j + 1] = rho[j];
      ys[j + 1] = (s_rr[j] - s_thth[j]) / rho[j];
    }
    xs[n_quad + 1] = model.radius;
    ys[n_quad + 1] = (s_rr[n_quad] - s_thth[n_quad]) / model.radius;
    const CumulativeSpline spline(xs, ys);

    double tn = 0.0;
    for (int j = 0; j < n_quad; ++j) {
      const double sig_rr = spline.tail[j + 1];
      const double p = sig_rr - s_rr[j];
      tn += wq[j] * (s_zz[j] + p) * rho[j];
    }
    trac.normal_force[it] = 2.0 * kPi * tn / l;
  }
  return trac;
}

std::vector<TimingRow> timing_matrix(
    const LiverModel& model, const std::vector<double>& dts,
    const std::vector<int>& terms,
    const std::function<PronySeries(int)>& series_for_terms, double horizon) {
  if (dts.size() < 2)
    throw std::invalid_argument("timing_matrix: need at least two step sizes");
  const Vec3 X = {model.radius, 0.0, model.height};

  std::vector<TimingRow> rows;
  for (double dt : dts) {
    const int steps = static_cast<int>(std::llround(horizon / dt));
    const UniformGrid grid(dt, steps);
    {
      StressHistory h = stress_history(X, model, StressEngine::gl, grid);
      rows.push_back({"gl", 0, dt, h.seconds, h.ops});
    }
    for (int N : terms) {
      const PronySeries s = series_for_terms(N);
      StressHistory h =
          stress_history(X, model, StressEngine::prony, grid, &s);
      rows.push_back({"prony", N, dt, h.seconds, h.ops});
    }
  }
  return rows;
}

}  // namespace caputo
