#include "caputo/prony.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace caputo {

void PronySeries::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("PronySeries: alpha must lie in (0, 1)");
  if (beta.size() != tau.size())
    throw std::invalid_argument("PronySeries: beta/tau size mismatch");
  if (!(beta0 >= 0.0) || !std::isfinite(beta0))
    throw std::invalid_argument("PronySeries: beta0 must be finite and >= 0");
  for (double b : beta)
    if (!(b > 0.0) || !std::isfinite(b))
      throw std::invalid_argument("PronySeries: beta_k must be finite and > 0");
  for (double t : tau)
    if (!(t > 0.0) || !std::isfinite(t))
      throw std::invalid_argument("PronySeries: tau_k must be finite and > 0");
}

PronySeries PronySeries::denormalized() const {
  if (!normalized) return *this;
  if (!(omega_star > 0.0))
    throw std::invalid_argument("PronySeries: omega_star required to de-normalize");
  PronySeries out = *this;
  out.normalized = false;
  out.beta0 = beta0 * std::pow(omega_star, alpha - 1.0);
  for (std::size_t k = 0; k < beta.size(); ++k) {
    out.beta[k] = beta[k] * std::pow(omega_star, alpha);
    out.tau[k] = tau[k] / omega_star;
  }
  return out;
}

PronySeries PronySeries::normalized_form() const {
  if (normalized) return *this;
  if (!(omega_star > 0.0))
    throw std::invalid_argument("PronySeries: omega_star required to normalize");
  PronySeries out = *this;
  out.normalized = true;
  out.beta0 = beta0 * std::pow(omega_star, 1.0 - alpha);
  for (std::size_t k = 0; k < beta.size(); ++k) {
    out.beta[k] = beta[k] * std::pow(omega_star, -alpha);
    out.tau[k] = tau[k] * omega_star;
  }
  return out;
}

std::string PronySeries::to_json() const {
  nlohmann::json j;
  j["alpha"] = alpha;
  j["N"] = terms();
  j["omega_star"] = omega_star;
  j["scale"] = scale;
  j["beta0"] = beta0;
  j["beta"] = beta;
  j["tau"] = tau;
  j["normalized"] = normalized;
  return j.dump();
}

PronySeries from_json_object(const nlohmann::json& j) {
  PronySeries s;
  s.alpha = j.at("alpha").get<double>();
  s.omega_star = j.at("omega_star").get<double>();
  s.scale = j.at("scale").get<double>();
  s.beta0 = j.at("beta0").get<double>();
  s.beta = j.at("beta").get<std::vector<double>>();
  s.tau = j.at("tau").get<std::vector<double>>();
  s.normalized = j.at("normalized").get<bool>();
  if (j.at("N").get<int>() != s.terms())
    throw std::invalid_argument("PronySeries: N does not match beta length");
  s.validate();
  return s;
}

PronySeries PronySeries::from_json(const std::string& text) {
  return from_json_object(nlohmann::json::parse(text));
}

PronyState::PronyState(const PronySeries& series, int channels, double dt)
    : channels_(channels), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("PronyState: dt must be > 0");
  if (channels < 1)
    throw std::invalid_argument("PronyState: channels must be >= 1");
  const PronySeries s = series.denormalized();
  s.validate();
  beta0_ = s.beta0;
  beta_ = s.beta;
  e_.resize(beta_.size());
  for (std::size_t k = 0; k < beta_.size(); ++k)
    e_[k] = std::exp(-dt / (2.0 * s.tau[k]));
  q_.assign(beta_.size() * static_cast<std::size_t>(channels_), 0.0);
  prev_.assign(channels_, 0.0);
}

std::size_t PronyState::state_bytes() const {
  return (q_.capacity() + prev_.capacity() + e_.capacity() + beta_.capacity()) *
         sizeof(double);
}

void PronyState::seed(std::span<const double> f0) {
  if (static_cast<int>(f0.size()) != channels_)
    throw std::invalid_argument("PronyState::seed: channel-count mismatch");
  std::copy(f0.begin(), f0.end(), prev_.begin());
  std::fill(q_.begin(), q_.end(), 0.0);
  seeded_ = true;
}

void PronyState::advance(std::span<const double> f_n, std::span<double> out) {
  if (!seeded_)
    throw std::logic_error("PronyState::advance: state was never seeded with f(0)");
  if (static_cast<int>(f_n.size()) != channels_ ||
      static_cast<int>(out.size()) != channels_)
    throw std::invalid_argument("PronyState::advance: channel-count mismatch");

  const double inv_dt = beta0_ / dt_;
  const int N = static_cast<int>(beta_.size());
  for (int c = 0; c < channels_; ++c) out[c] = inv_dt * (f_n[c] - prev_[c]);
  for (int k = 0; k < N; ++k) {
    const double e = e_[k];
    const double ee = e * e;
    const double eb = e * beta_[k];
    double* qk = q_.data() + static_cast<std::size_t>(k) * channels_;
    for (int c = 0; c < channels_; ++c) {
      qk[c] = ee * qk[c] + eb * (f_n[c] - prev_[c]);
      out[c] += qk[c];
    }
  }
  std::copy(f_n.begin(), f_n.end(), prev_.begin());
  ops_ += static_cast<std::uint64_t>(N + 1) * channels_;
}

std::vector<double> PronyState::advance(std::span<const double> f_n) {
  std::vector<double> out(channels_);
  advance(f_n, out);
  return out;
}

double consolidated_gamma(const PronySeries& series, double dt) {
  if (!(dt > 0.0))
    throw std::invalid_argument("consolidated_gamma: dt must be > 0");
  const PronySeries s = series.denormalized();
  double g = s.beta0 / dt;
  for (std::size_t k = 0; k < s.beta.size(); ++k)
    g += s.beta[k] * std::exp(-dt / (2.0 * s.tau[k]));
  return g;
}

double truncation_error(const PronySeries& series, double z) {
  if (z < 0.0) throw std::invalid_argument("truncation_error: z must be >= 0");
  const PronySeries s = series.denormalized();
  const double a = s.alpha;
  double eps = std::pow(z, 1.0 - a) / gamma_fn(2.0 - a) - s.beta0;
  for (std::size_t k = 0; k < s.beta.size(); ++k)
    eps += s.beta[k] * s.tau[k] * (std::exp(-z / s.tau[k]) - 1.0);
  return eps;
}

namespace {

// Golden-section refinement of |eps| on a bracketing triple.
double refine_abs_max(const PronySeries& s, double lo, double hi) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = std::abs(truncation_error(s, x1));
  double f2 = std::abs(truncation_error(s, x2));
  for (int it = 0; it < 80 && (b - a) > 1e-14 * (1.0 + hi); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = std::abs(truncation_error(s, x2));
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = std::abs(truncation_error(s, x1));
    }
  }
  return std::max(f1, f2);
}

}  // namespace

TruncationProfile truncation_norms(const PronySeries& series, double T,
                                   int n_samples) {
  if (!(T > 0.0)) throw std::invalid_argument("truncation_norms: T must be > 0");
  if (n_samples < 1000)
    throw std::invalid_argument("truncation_norms: n_samples must be >= 1000");

  TruncationProfile prof;
  prof.series = series.denormalized();
  prof.horizon = T;
  prof.z.resize(n_samples + 1);
  prof.eps.resize(n_samples + 1);
  const double dz = T / n_samples;
  for (int i = 0; i <= n_samples; ++i) {
    prof.z[i] = i * dz;
    prof.eps[i] = truncation_error(prof.series, prof.z[i]);
  }

  double sup = std::max(std::abs(prof.eps.front()), std::abs(prof.eps.back()));
  for (int i = 1; i < n_samples; ++i) {
    const double f = std::abs(prof.eps[i]);
    sup = std::max(sup, f);
    if (f >= std::abs(prof.eps[i - 1]) && f >= std::abs(prof.eps[i + 1]))
      sup = std::max(sup, refine_abs_max(prof.series, prof.z[i - 1], prof.z[i + 1]));
  }
  prof.eps_inf = sup;
  prof.eps_l2 = l2_norm_trapezoid(prof.eps, dz);
  return prof;
}

ErrorBound::ErrorBound(const PronySeries& series, double eps_inf_)
    : eps_inf(eps_inf_) {
  const PronySeries s = series.denormalized();
  s.validate();
  beta0 = s.beta0;
  c_btau = 0.0;
  for (std::size_t k = 0; k < s.beta.size(); ++k) {
    const double t = s.tau[k];
    // 1 + e_k <= 2 for every dt > 0, keeping the constant step-size free.
    const double m = std::max({1.0 / (t * t), 1.0 / t, 2.0});
    c_btau += s.beta[k] / 24.0 * m;
  }
}

double ErrorBound::operator()(double dt, double fprime0, double f2_l1,
                              double f_w3inf) const {
  if (dt < 0.0 || fprime0 < 0.0 || f2_l1 < 0.0 || f_w3inf < 0.0)
    throw std::invalid_argument("ErrorBound: arguments must be >= 0");
  return eps_inf * (fprime0 + f2_l1) + dt * (0.5 * beta0 + c_btau * dt) * f_w3inf;
}

double theorem1_bound(const ErrorBound& bound, double dt, double fprime0,
                      double f2_l1, double f_w3inf) {
  return bound(dt, fprime0, f2_l1, f_w3inf);
}

}  // namespace caputo
