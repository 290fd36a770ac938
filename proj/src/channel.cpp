// src/channel.cpp

#include "mecgame/channel.hpp"

#include <cmath>
#include <limits>

#include "mecgame/types.hpp"

namespace mecgame {

ChannelModel ChannelModel::rayleigh(double mean_gain) {
  if (!(mean_gain > 0.0) || !std::isfinite(mean_gain)) {
    throw DomainError("rayleigh channel: mean gain must be positive and finite");
  }
  return ChannelModel(Family::Rayleigh, mean_gain);
}

std::string ChannelModel::name() const {
  switch (family_) {
    case Family::Rayleigh:
      return "rayleigh";
  }
  return "unknown";
}

double ChannelModel::ccdf(double z) const {
  if (z <= 0.0) return 1.0;
  return std::exp(-z / mean_gain_);
}

double ChannelModel::inverse_ccdf(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("inverse_ccdf: probability outside [0, 1]");
  }
  if (p == 0.0) return std::numeric_limits<double>::infinity();
  return -mean_gain_ * std::log(p);
}

double ChannelModel::inverse_ccdf_derivative(double p) const {
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError("inverse_ccdf_derivative: probability outside (0, 1]");
  }
  return -mean_gain_ / p;
}

}  // namespace mecgame
