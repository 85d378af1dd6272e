#pragma once

namespace ccce {

// Confidence level alpha in the open interval (0, 1).
class Confidence {
 public:
  explicit Confidence(double alpha);

  double alpha() const { return alpha_; }
  // q(alpha) = Phi^{-1}(alpha), the multiplier on sigma in the margin.
  double quantile() const { return quantile_; }

 private:
  double alpha_;
  double quantile_;
};

double std_normal_pdf(double x);

// Phi(x), absolute error well below 1e-12.
double std_normal_cdf(double x);

// Phi^{-1}(p) for p in (0, 1); throws InputError otherwise.
double std_normal_quantile(double p);

// d q(alpha) / d alpha = 1 / phi(q(alpha)).
double std_normal_quantile_derivative(double p);

}  // namespace ccce
