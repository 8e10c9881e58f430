#include "tripmatch/wtp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tripmatch/error.hpp"

namespace tripmatch {

WtpModel WtpModel::uniform(double low, double high) {
  if (!(std::isfinite(low) && std::isfinite(high) && low < high)) {
    throw InvalidArgument("uniform WTP needs finite low < high");
  }
  return WtpModel(Kind::kUniform, low, high);
}

WtpModel WtpModel::exponential(double mean) {
  if (!(std::isfinite(mean) && mean > 0.0)) {
    throw InvalidArgument("exponential WTP needs a positive mean");
  }
  return WtpModel(Kind::kExponential, mean, 0.0);
}

double WtpModel::conversion(double price) const {
  switch (kind_) {
    case Kind::kUniform:
      return std::clamp((b_ - price) / (b_ - a_), 0.0, 1.0);
    case Kind::kExponential:
      return price <= 0.0 ? 1.0 : std::exp(-price / a_);
  }
  return 0.0;
}

double WtpModel::price(double conversion) const {
  const double lambda = std::clamp(conversion, 0.0, 1.0);
  switch (kind_) {
    case Kind::kUniform:
      return b_ - (b_ - a_) * lambda;
    case Kind::kExponential:
      if (lambda <= 0.0) return std::numeric_limits<double>::infinity();
      return -a_ * std::log(lambda);
  }
  return 0.0;
}

double WtpModel::revenue_factor(double conversion) const {
  if (conversion <= 0.0) return 0.0;
  return conversion * price(conversion);
}

std::string WtpModel::describe() const {
  std::ostringstream out;
  if (kind_ == Kind::kUniform) {
    out << "uniform(" << a_ << ", " << b_ << ")";
  } else {
    out << "exponential(" << a_ << ")";
  }
  return out.str();
}

}  // namespace tripmatch
