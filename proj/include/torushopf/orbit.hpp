#pragma once

#include <Eigen/Dense>

#include "torushopf/lattice.hpp"

namespace torushopf {

// A periodic solution stored on a uniform time grid.  Column j of `samples`
// is the stacked state at time j*period/m, j = 0..m-1 (the endpoint is the
// wrap-around).  Interpolation is periodic Catmull-Rom in each coordinate.
struct PeriodicOrbit {
  LatticeParams params;
  double period = 0.0;
  Eigen::MatrixXd samples;  // 2n^3 rows, m columns
  double residual = 0.0;    // closure defect |phi_T(x0) - x0|_inf

  int sample_count() const { return static_cast<int>(samples.cols()); }
  Eigen::VectorXd initial_state() const { return samples.col(0); }

  // State at arbitrary time, period-wrapped.
  Eigen::VectorXd state_at(double t) const;

  // Largest per-coordinate span (max minus min) over the grid.
  double amplitude() const;

  bool converged() const { return residual <= 1e-8 && period > 0.0; }
};

}  // namespace torushopf
