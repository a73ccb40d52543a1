#include "torushopf/orbit.hpp"

#include <cmath>

namespace torushopf {

// Periodic Catmull-Rom over the uniform sample grid.
Eigen::VectorXd PeriodicOrbit::state_at(double t) const {
  const int m = sample_count();
  const double u = std::fmod(t / period, 1.0) * m;
  const double uw = u < 0 ? u + m : u;
  int j = static_cast<int>(std::floor(uw));
  double s = uw - j;
  if (j >= m) {
    j -= m;
  }
  const auto col = [&](int k) {
    return samples.col(((k % m) + m) % m);
  };
  const Eigen::VectorXd p0 = col(j - 1), p1 = col(j), p2 = col(j + 1),
                        p3 = col(j + 2);
  return 0.5 * ((2.0 * p1) + (p2 - p0) * s +
                (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * (s * s) +
                (3.0 * p1 - p0 - 3.0 * p2 + p3) * (s * s * s));
}

double PeriodicOrbit::amplitude() const {
  if (samples.size() == 0) return 0.0;
  return (samples.rowwise().maxCoeff() - samples.rowwise().minCoeff())
      .maxCoeff();
}

}  // namespace torushopf
