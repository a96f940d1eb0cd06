#include "roughmf/model.hpp"

#include <cmath>

#include "roughmf/errors.hpp"

namespace roughmf {

ThetaCurve::ThetaCurve(double constant) : starts_{0.0}, values_{constant} {
  if (!(constant >= 0.0) || !std::isfinite(constant)) {
    throw DomainError("theta must be finite and non-negative");
  }
}

ThetaCurve::ThetaCurve(std::vector<double> starts, std::vector<double> values)
    : starts_(std::move(starts)), values_(std::move(values)) {
  if (starts_.empty() || starts_.size() != values_.size()) {
    throw ValidationError("theta curve needs one start per value");
  }
  if (starts_.front() != 0.0) throw ValidationError("theta curve must start at t = 0");
  for (std::size_t j = 1; j < starts_.size(); ++j) {
    if (!(starts_[j] > starts_[j - 1])) throw ValidationError("theta breakpoints must increase strictly");
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("theta must be finite and non-negative");
  }
}

double ThetaCurve::operator()(double t) const {
  auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
  if (it == starts_.begin()) return values_.front();
  return values_[static_cast<std::size_t>(it - starts_.begin()) - 1];
}

void ModelParams::validate() const {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be non-negative");
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("rho must lie in [-1, 1]");
  if (!(nu >= 0.0)) throw DomainError("nu must be non-negative");
  const bool hurst_ok = classical_mode ? (hurst > 0.0 && hurst <= 0.5) : (hurst > 0.0 && hurst < 0.5);
  if (!hurst_ok) throw DomainError("hurst must lie in (0, 1/2)");
  if (!(v0 >= 0.0)) throw DomainError("v0 must be non-negative");
  if (!(s0 > 0.0)) throw DomainError("s0 must be positive");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
}

}  // namespace roughmf
