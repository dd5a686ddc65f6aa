#pragma once

#include <vector>

#include "secrd/finite_info.hpp"

namespace secrd {

struct RdOptions {
  double rate_tolerance = 1e-9;  // bits, on the Blahut upper/lower bound gap
  int max_iterations = 10000;    // per Blahut-Arimoto run
};

struct RdPoint {
  double distortion = 0.0;           // the constraint level
  double rate = 0.0;                 // bits
  double achieved_distortion = 0.0;  // expected distortion of the channel below
  double tolerance = 0.0;            // achieved bound gap, bits
  int iterations = 0;
  std::vector<std::vector<double>> channel;  // channel[x][w] = Q(w | x)

  JointDistribution joint(const Distribution& q) const { return JointDistribution::from_channel(q, channel); }
};

// Smallest distortion reachable at rate zero: min_w sum_x q(x) d(x, w).
double zero_rate_distortion(const Distribution& q, const DistortionMatrix& d);

RdPoint rate_distortion(const Distribution& q, const DistortionMatrix& d, double target_distortion,
                        const RdOptions& options = {});

// Smallest D with R(q, D) <= target_rate, to 1e-7.
double inverse_rate_distortion(const Distribution& q, const DistortionMatrix& d, double target_rate,
                               const RdOptions& options = {});

std::vector<RdPoint> rd_curve(const Distribution& q, const DistortionMatrix& d, int num_points,
                              const RdOptions& options = {});

}  // namespace secrd
