#pragma once

// Bayesian piecewise-linear difference-in-differences for a word series and its
// synthetic control:
//
//   log10 y = alpha + beta t + beta_post P(t) + beta_gpt_post d_gpt P(t) + eps
//
// with t in years since the window start and P(t) the post-event regressor,
// either the hinge (t - t_event) d_post (continuous at the event) or the
// literal d_post t. Coefficients have independent N(0, s^2) priors, the noise
// scale sigma a half-Cauchy(0, s_sigma) prior. The posterior is sampled with a
// blocked Gibbs sampler: coefficients are conditionally Gaussian given sigma,
// and the half-Cauchy is written as an inverse-gamma scale mixture so that
// sigma^2 and its auxiliary variable have inverse-gamma conditionals.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "lexshift/calendar.hpp"
#include "lexshift/common.hpp"
#include "lexshift/corpus.hpp"
#include "lexshift/mcmc.hpp"
#include "lexshift/random.hpp"
#include "lexshift/stats.hpp"

namespace lexshift {

enum class DesignMode { hinge, as_printed };

[[nodiscard]] inline std::string to_string(DesignMode m) { return m == DesignMode::hinge ? "hinge" : "as_printed"; }

[[nodiscard]] inline DesignMode parse_design_mode(std::string_view s) {
  if (s == "hinge") return DesignMode::hinge;
  if (s == "as_printed") return DesignMode::as_printed;
  throw InvalidInput("unknown design mode '" + std::string(s) + "'");
}

/// A treated series and its control on the same months.
struct PairedSeries {
  std::vector<YearMonth> months;
  std::vector<double> y_treated;
  std::vector<double> y_control;
};

struct DidObservation {
  double t = 0.0;  // years since the window start
  int d_post = 0;
  int d_gpt = 0;
  double y = 0.0;
};

struct DidDesign {
  std::vector<DidObservation> observations;
  double t_event = 0.0;
  DesignMode mode = DesignMode::hinge;
  Eigen::MatrixXd X;  // columns: 1, t, post term, d_gpt * post term
  Eigen::VectorXd y;
};

[[nodiscard]] inline Eigen::RowVector4d design_row(const DidObservation& o, double t_event, DesignMode mode) {
  double post = mode == DesignMode::hinge ? (o.t - t_event) * o.d_post : o.t * o.d_post;
  return {1.0, o.t, post, o.d_gpt * post};
}

/// Control rows (d_gpt = 0) first, then treated rows. The event month belongs
/// to the pre period: d_post = 1 exactly when t > t_event.
[[nodiscard]] inline DidDesign build_design(const PairedSeries& series, YearMonth window_start, YearMonth event,
                                            DesignMode mode = DesignMode::hinge) {
  const std::size_t n = series.months.size();
  if (series.y_treated.size() != n || series.y_control.size() != n)
    throw InvalidInput("build_design: treated and control series are not on the same month grid");
  if (n == 0) throw InvalidInput("build_design: empty series");
  for (std::size_t i = 0; i < n; ++i) {
    if (series.months[i] < window_start) throw InvalidInput("build_design: month precedes the window start");
    if (i > 0 && !(series.months[i - 1] < series.months[i])) throw InvalidInput("build_design: months not ascending");
  }
  if (!(series.months.front() <= event && event < series.months.back()))
    throw InvalidInput("build_design: event month " + event.str() + " is not inside the series window");
  DidDesign d;
  d.mode = mode;
  d.t_event = months_between(window_start, event) / 12.0;
  for (int group = 0; group < 2; ++group) {
    const auto& ys = group == 1 ? series.y_treated : series.y_control;
    for (std::size_t i = 0; i < n; ++i) {
      double t = months_between(window_start, series.months[i]) / 12.0;
      d.observations.push_back({t, t > d.t_event ? 1 : 0, group, ys[i]});
    }
  }
  d.X.resize(static_cast<Eigen::Index>(d.observations.size()), 4);
  d.y.resize(static_cast<Eigen::Index>(d.observations.size()));
  for (std::size_t r = 0; r < d.observations.size(); ++r) {
    d.X.row(static_cast<Eigen::Index>(r)) = design_row(d.observations[r], d.t_event, mode);
    d.y(static_cast<Eigen::Index>(r)) = d.observations[r].y;
  }
  return d;
}

/// Treated series against a control on the same grid (e.g. a synthetic control).
[[nodiscard]] inline DidDesign build_design(const FrequencySeries& treated, std::span<const double> control,
                                            YearMonth window_start, YearMonth event,
                                            DesignMode mode = DesignMode::hinge) {
  if (control.size() != treated.size())
    throw InvalidInput("build_design: control series length differs from treated series");
  PairedSeries p;
  for (std::size_t i = 0; i < treated.size(); ++i) p.months.push_back(treated.month(i));
  p.y_treated = treated.log_rel_freq;
  p.y_control.assign(control.begin(), control.end());
  return build_design(p, window_start, event, mode);
}

struct PriorSpec {
  double coef_prior_scale = 10.0;
  double sigma_prior_scale = 1.0;

  void validate() const {
    if (!(coef_prior_scale > 0.0) || !(sigma_prior_scale > 0.0))
      throw InvalidInput("prior scales must be strictly positive");
  }
};

struct SamplerOptions {
  int chains = 4;
  int draws_per_chain = 1000;
  int warmup = 1000;  // discarded iterations per chain before the kept draws
  std::uint64_t seed = 0;
};

inline constexpr std::array<const char*, 5> kDidParameterNames = {"alpha", "beta", "beta_post", "beta_gpt_post",
                                                                   "sigma"};
inline constexpr std::size_t kBetaGptPost = 3;
inline constexpr std::size_t kSigma = 4;

using DidDraw = std::array<double, 5>;

struct DidPosterior {
  DesignMode mode = DesignMode::hinge;
  double t_event = 0.0;
  int warmup = 0;
  std::vector<std::vector<DidDraw>> chains;
  std::array<double, 5> split_rhat{};
  std::array<double, 5> ess{};
  std::vector<std::string> warnings;

  /// Draws of one parameter, one vector per chain.
  [[nodiscard]] std::vector<std::vector<double>> parameter(std::size_t k) const {
    std::vector<std::vector<double>> out;
    for (const auto& c : chains) {
      std::vector<double> v;
      v.reserve(c.size());
      for (const auto& d : c) v.push_back(d[k]);
      out.push_back(std::move(v));
    }
    return out;
  }

  [[nodiscard]] std::vector<double> pooled(std::size_t k) const {
    std::vector<double> out;
    for (const auto& c : chains)
      for (const auto& d : c) out.push_back(d[k]);
    return out;
  }
};

inline constexpr double kRhatWarning = 1.05;

namespace detail {

inline double inverse_gamma(Rng& rng, double shape, double scale) {
  std::gamma_distribution<double> g(shape, 1.0);
  double x = scale / g(rng);
  return std::max(x, std::numeric_limits<double>::min());
}

}  // namespace detail

/// Runs `chains` independent Gibbs chains. Chain c uses the substream
/// derive_seed(seed, "didreg.chain", c).
[[nodiscard]] inline DidPosterior sample_posterior(const DidDesign& design, const PriorSpec& priors = {},
                                                   const SamplerOptions& opt = {}) {
  priors.validate();
  const Eigen::Index n = design.X.rows();
  if (n < 8) throw InvalidInput("sample_posterior: need at least 8 observations");
  if (opt.chains < 1 || opt.draws_per_chain < 2 || opt.warmup < 0) throw InvalidInput("sample_posterior: bad sampler options");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.X);
  if (qr.rank() < design.X.cols()) throw InvalidInput("sample_posterior: design matrix is rank deficient");

  const Eigen::MatrixXd xtx = design.X.transpose() * design.X;
  const Eigen::VectorXd xty = design.X.transpose() * design.y;
  const Eigen::VectorXd ols = qr.solve(design.y);
  const double ols_sd =
      std::max(std::sqrt((design.y - design.X * ols).squaredNorm() / static_cast<double>(std::max<Eigen::Index>(n - 4, 1))),
               1e-6);
  const double prior_precision = 1.0 / (priors.coef_prior_scale * priors.coef_prior_scale);
  const double inv_s2 = 1.0 / (priors.sigma_prior_scale * priors.sigma_prior_scale);

  DidPosterior post;
  post.mode = design.mode;
  post.t_event = design.t_event;
  post.warmup = opt.warmup;
  post.chains.resize(static_cast<std::size_t>(opt.chains));

  for (int c = 0; c < opt.chains; ++c) {
    Rng rng = make_rng(opt.seed, "didreg.chain", static_cast<std::uint64_t>(c));
    std::normal_distribution<double> std_normal(0.0, 1.0);
    // Overdispersed start around the least-squares fit.
    double sigma2 = std::pow(ols_sd * std::exp(std_normal(rng)), 2);
    double aux = 1.0;
    Eigen::Vector4d beta = Eigen::Vector4d::Zero();
    auto& chain = post.chains[static_cast<std::size_t>(c)];
    chain.reserve(static_cast<std::size_t>(opt.draws_per_chain));
    for (int it = 0; it < opt.warmup + opt.draws_per_chain; ++it) {
      Eigen::Matrix4d precision = xtx / sigma2;
      precision.diagonal().array() += prior_precision;
      Eigen::LLT<Eigen::Matrix4d> llt(precision);
      Eigen::Vector4d mean = llt.solve(xty / sigma2);
      Eigen::Vector4d z;
      for (int k = 0; k < 4; ++k) z(k) = std_normal(rng);
      // precision = L L^T, so L^{-T} z has covariance precision^{-1}.
      beta = mean + llt.matrixU().solve(z);

      double ssr = (design.y - design.X * beta).squaredNorm();
      sigma2 = detail::inverse_gamma(rng, 0.5 * (static_cast<double>(n) + 1.0), 0.5 * ssr + 1.0 / aux);
      aux = detail::inverse_gamma(rng, 1.0, inv_s2 + 1.0 / sigma2);

      if (it >= opt.warmup) chain.push_back({beta(0), beta(1), beta(2), beta(3), std::sqrt(sigma2)});
    }
  }

  for (std::size_t k = 0; k < 5; ++k) {
    auto per_chain = post.parameter(k);
    post.split_rhat[k] = mcmc::split_rhat(per_chain);
    post.ess[k] = mcmc::effective_sample_size(per_chain);
    if (!(post.split_rhat[k] <= kRhatWarning))
      post.warnings.push_back(std::string("split R-hat of ") + kDidParameterNames[k] + " is " +
                              std::to_string(post.split_rhat[k]) + " (> 1.05)");
  }
  return post;
}

/// 100 (10^b - 1): a log10-per-year slope as percent growth per year.
[[nodiscard]] inline double annual_percent_change(double log10_slope) {
  return 100.0 * (std::pow(10.0, log10_slope) - 1.0);
}

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double median = 0.0;
  double hdi_lo = 0.0;
  double hdi_hi = 0.0;
  double rhat = 0.0;
  double ess = 0.0;
  std::optional<double> annual_pct_change;  // slopes only, from the posterior mean
};

/// Mean, median and 95% HDI per parameter, plus percent growth per year for
/// the slope coefficients.
[[nodiscard]] inline std::vector<ParameterSummary> summarize(const DidPosterior& post) {
  if (post.chains.empty() || post.chains.front().empty()) throw InvalidInput("summarize: empty posterior");
  std::vector<ParameterSummary> out;
  for (std::size_t k = 0; k < 5; ++k) {
    auto draws = post.pooled(k);
    std::sort(draws.begin(), draws.end());
    ParameterSummary s;
    s.name = kDidParameterNames[k];
    s.mean = stats::mean(draws);
    s.median = stats::quantile_sorted(draws, 0.5);
    std::tie(s.hdi_lo, s.hdi_hi) = stats::hdi_sorted(draws, 0.95);
    s.rhat = post.split_rhat[k];
    s.ess = post.ess[k];
    if (k >= 1 && k <= 3) s.annual_pct_change = annual_percent_change(s.mean);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace lexshift
