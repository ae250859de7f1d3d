#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "precip/random.hpp"

namespace precip {

/// Tempered Snedecor-Fisher law F(x) = (lambda x^gamma / (1 + lambda x^gamma))^r,
/// the null model for the largest daily volume within a wet period.
struct TemperedSFParams {
  double r;
  double lambda;  // mm^-gamma
  double gamma;

  TemperedSFParams(double r, double lambda, double gamma);
};

/// Gamma law with shape and rate (mean shape / rate).
struct GammaParams {
  double shape;
  double rate;

  GammaParams(double shape, double rate);
};

/// Negative binomial law on {0, 1, ...} with P(N = 0) = p^r.
struct NegBinParams {
  double r;
  double p;

  NegBinParams(double r, double p);
};

/// Snedecor-Fisher law Q_{k,r} with density proportional to
/// x^{k-1} / (1 + (k/r) x)^{k+r}. This is the classical F law with
/// (2k, 2r) degrees of freedom.
struct SFParams {
  double k;
  double r;

  SFParams(double k, double r);
};

/// Beta law with density proportional to (1 - x)^{k-1} x^{r-1}.
///
/// The pair is stored in (k, r) order as it appears in the share statistic
/// R = G_r / (G_r + G_k): in the conventional Beta(alpha, beta) notation this
/// is Beta(alpha = r, beta = k). Keep this in mind when comparing with other
/// libraries.
struct BetaParams {
  double k;
  double r;

  BetaParams(double k, double r);
};

/// Frechet law exp(-mu x^{-gamma}).
struct FrechetParams {
  double mu;
  double gamma;

  FrechetParams(double mu, double gamma);
};

// Beta
double beta_pdf(const BetaParams& params, double x);
double beta_cdf(const BetaParams& params, double x);
double beta_quantile(const BetaParams& params, double p);

// Snedecor-Fisher
double sf_pdf(const SFParams& params, double x);
double sf_cdf(const SFParams& params, double x);
double sf_quantile(const SFParams& params, double p);

// Tempered Snedecor-Fisher (closed forms)
double tempered_sf_pdf(const TemperedSFParams& params, double x);
double tempered_sf_cdf(const TemperedSFParams& params, double x);
double tempered_sf_quantile(const TemperedSFParams& params, double p);

// Negative binomial
double negbin_pmf(const NegBinParams& params, std::int64_t n);
double negbin_cdf(const NegBinParams& params, std::int64_t n);
double negbin_mean(const NegBinParams& params);

// Gamma
double gamma_pdf(const GammaParams& params, double x);
double gamma_cdf(const GammaParams& params, double x);
double gamma_quantile(const GammaParams& params, double p);

// Frechet
double frechet_cdf(const FrechetParams& params, double x);

// Single draws from caller-owned generator state.
double draw_gamma(const GammaParams& params, Rng& rng);
std::int64_t draw_negbin(const NegBinParams& params, Rng& rng);
double draw_tempered_sf(const TemperedSFParams& params, Rng& rng);

// i.i.d. samples; the same seed always yields the same sequence.
std::vector<double> sample_gamma(const GammaParams& params, std::size_t n, std::uint64_t seed);
std::vector<std::int64_t> sample_negbin(const NegBinParams& params, std::size_t n,
                                        std::uint64_t seed);
std::vector<double> sample_tempered_sf(const TemperedSFParams& params, std::size_t n,
                                       std::uint64_t seed);

}  // namespace precip
