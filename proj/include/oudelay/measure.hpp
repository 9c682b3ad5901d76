#pragma once

#include <cmath>
#include <stdexcept>

#include "oudelay/rng.hpp"

namespace oud {

/// Initial distribution of the driver at time 0: a strictly positive C^1
/// density.  The Gaussian family covers every verification in the suite;
/// any other positive C^1 density can be slotted in through the same
/// (pdf, log_pdf, sample) surface.
struct MeasureModel {
  double mean = 0.0;
  double stddev = 1.0;

  MeasureModel() = default;
  MeasureModel(double mu, double sigma) : mean(mu), stddev(sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("stddev must be positive");
  }

  double log_pdf(double x) const {
    const double z = (x - mean) / stddev;
    return -0.5 * z * z - std::log(stddev) - 0.9189385332046727;  // log sqrt(2 pi)
  }

  double pdf(double x) const { return std::exp(log_pdf(x)); }

  double cdf(double x) const {
    return 0.5 * std::erfc(-(x - mean) / (stddev * 1.4142135623730951));
  }

  double sample(NormalStream& z) const { return mean + stddev * z(); }
};

}  // namespace oud
