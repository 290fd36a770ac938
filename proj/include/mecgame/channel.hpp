// include/mecgame/channel.hpp
//
// Small-scale fading model: the distribution of the power gain |h|^2 enters
// the game only through its complementary CDF and the inverse of it.

#pragma once

#include <string>

namespace mecgame {

class ChannelModel {
 public:
  enum class Family { Rayleigh };

  /// Rayleigh fading: |h|^2 exponential with the given mean.
  static ChannelModel rayleigh(double mean_gain = 1.0);

  Family family() const { return family_; }
  double mean_gain() const { return mean_gain_; }
  std::string name() const;

  /// Pr(|h|^2 > z). Equals 1 for z <= 0.
  double ccdf(double z) const;
  /// Smallest z with ccdf(z) = p, p in (0, 1]. p = 0 maps to +inf.
  double inverse_ccdf(double p) const;
  /// d/dp inverse_ccdf(p), p in (0, 1].
  double inverse_ccdf_derivative(double p) const;
  /// Inverse-transform draw from a uniform u in (0, 1).
  double sample(double u) const { return inverse_ccdf(u); }

  friend bool operator==(const ChannelModel&, const ChannelModel&) = default;

 private:
  ChannelModel(Family family, double mean_gain)
      : family_(family), mean_gain_(mean_gain) {}

  Family family_;
  double mean_gain_;
};

}  // namespace mecgame
