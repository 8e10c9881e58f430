#pragma once

#include <string>

namespace tripmatch {

// Willingness-to-pay distribution F of one rider type. A rider converts when
// their WTP is at least the quoted price, so the conversion probability is
// lambda = 1 - F(p) and price(lambda) is its inverse.
class WtpModel {
 public:
  enum class Kind { kUniform, kExponential };

  // WTP ~ U[low, high]; price(lambda) = high - (high - low) * lambda.
  static WtpModel uniform(double low = 0.0, double high = 1.0);
  // WTP ~ Exp(mean); price(lambda) = -mean * ln(lambda).
  static WtpModel exponential(double mean);

  Kind kind() const noexcept { return kind_; }
  double low() const noexcept { return a_; }
  double high() const noexcept { return b_; }
  double mean() const noexcept { return a_; }

  double conversion(double price) const;
  double price(double conversion) const;
  // lambda * price(lambda); defined as 0 at lambda = 0.
  double revenue_factor(double conversion) const;

  // price(lambda) = intercept - slope * lambda for every lambda in [0, 1].
  bool has_linear_price() const noexcept { return kind_ == Kind::kUniform; }

  std::string describe() const;

  friend bool operator==(const WtpModel&, const WtpModel&) = default;

 private:
  WtpModel(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_ = Kind::kUniform;
  double a_ = 0.0;
  double b_ = 1.0;
};

// How a quoted price turns into the fare a converted rider pays.
enum class FareConvention {
  kPerMile,  // fare = price * l_i
  kPerTrip,  // fare = price
};

}  // namespace tripmatch
