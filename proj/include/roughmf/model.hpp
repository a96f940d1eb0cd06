#pragma once

#include <algorithm>
#include <vector>

namespace roughmf {

/// Non-negative piecewise-constant mean-reversion level.
///
/// Piece j holds value values[j] on [starts[j], starts[j+1]); the last piece
/// extends to +∞. starts[0] is always 0.
class ThetaCurve {
 public:
  ThetaCurve() : ThetaCurve(0.0) {}
  explicit ThetaCurve(double constant);
  ThetaCurve(std::vector<double> starts, std::vector<double> values);

  double operator()(double t) const;

  bool is_constant() const { return values_.size() == 1; }
  const std::vector<double>& starts() const { return starts_; }
  const std::vector<double>& values() const { return values_; }

  /// Calls f(a, b, value) for every constant piece intersected with [0, t].
  template <class F>
  void for_each_piece(double t, F&& f) const {
    for (std::size_t j = 0; j < values_.size(); ++j) {
      const double a = starts_[j];
      if (a >= t) break;
      const double b = (j + 1 < starts_.size()) ? std::min(starts_[j + 1], t) : t;
      f(a, b, values_[j]);
    }
  }

 private:
  std::vector<double> starts_;
  std::vector<double> values_;
};

/// Rough Heston parameter set.
struct ModelParams {
  double lambda = 0.3;  // mean-reversion speed
  double rho = -0.7;    // spot/variance correlation
  double nu = 0.3;      // vol-of-vol
  double hurst = 0.1;
  double v0 = 0.02;
  ThetaCurve theta{0.02};
  double s0 = 1.0;
  double horizon = 1.0;
  // Admits hurst = 1/2 (classical Heston, K ≡ 1) for limit checks.
  bool classical_mode = false;

  double alpha() const { return hurst + 0.5; }

  /// Throws DomainError on any field outside its admissible range.
  void validate() const;
};

}  // namespace roughmf
