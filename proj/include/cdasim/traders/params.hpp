#pragma once

namespace cdasim {

struct ZipParams {
  double beta_min{0.1};
  double beta_max{0.5};
  double momentum_min{0.0};
  double momentum_max{0.1};
  double margin_min{0.05};
  double margin_max{0.35};
  // Target perturbation: tau = R*q + A. Price-raising targets draw
  // R ~ U(1, 1 + rel_max), A ~ U(0, abs_max); price-lowering targets mirror both.
  double rel_max{0.05};
  double abs_max{5.0};
};

struct GdxParams {
  double gamma{0.9};
  int horizon{10};
  int history{30};
};

struct AaParams {
  double rho{0.67};  // recency weight of the equilibrium estimate
  int window{30};    // trades kept for the estimate and volatility
  double theta_min{-8.0};
  double theta_max{2.0};
  double theta_init{-4.0};
  double r_init{0.0};
  double beta1{0.2};  // aggressiveness learning rate
  double beta2{0.1};  // theta learning rate
  double lambda_r{0.05};
  double lambda_a{0.05};
  double alpha_max{0.3};
  double eta{3.0};
};

struct TraderParams {
  ZipParams zip{};
  GdxParams gdx{};
  AaParams aa{};
};

}  // namespace cdasim
