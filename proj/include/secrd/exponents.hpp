#pragma once

#include <cstddef>

#include "secrd/finite_info.hpp"
#include "secrd/rd_solver.hpp"

namespace secrd {

struct SimplexSearch {
  int resolution = 64;          // coarse grid step 1/resolution per coordinate
  int refinement_rounds = 2;
  int refinement_factor = 8;
  std::size_t max_grid_points = 5000;  // coarse resolution drops below 64 past this
  unsigned threads = 1;
  RdOptions rd;
};

struct ExponentMeta {
  int grid_resolution = 0;  // coarse resolution actually used
  int refinement_rounds = 0;
  int final_resolution = 0;
  std::size_t evaluations = 0;
  bool near_boundary = false;  // argmin within 1e-3 bits of a constraint boundary
};

struct ExponentResult {
  double value = 0.0;  // bits per symbol; may be +infinity
  Distribution argmin;
  ExponentMeta meta;
};

// min_Q D(Q||p) + R_E(Q, D).
ExponentResult perfect_secrecy_exponent(const Distribution& p, const DistortionMatrix& d_e, double distortion,
                                        const SimplexSearch& search = {});

// Infimum of D(Q||p) over {Q : R_L(Q, d_c) > r_c}; +infinity for an empty set.
ExponentResult marton_exponent(const Distribution& p, const DistortionMatrix& d_l, double d_c, double r_c,
                               const SimplexSearch& search = {});

// min(r_key, perfect-secrecy exponent).
double theorem_exponent(double r_key, const Distribution& p, const DistortionMatrix& d_e, double distortion,
                        const SimplexSearch& search = {});

// D(q||p) + R_E(q, D): per-type exponent of a blind guess.
double blind_guess_exponent(const Distribution& q, const Distribution& p, const DistortionMatrix& d_e,
                            double distortion);

// min(H(q) + r_key - R_L(q, d_c), H(q)): D-cover size exponent of the packing codebook.
double packing_exponent_e0(const Distribution& q, double r_key, const DistortionMatrix& d_l, double d_c);

}  // namespace secrd
