#include "torushopf/lattice.hpp"

namespace torushopf {

std::string variant_name(Variant v) {
  return v == Variant::VdpBidirectionalY ? "vdp" : "vdpl";
}

Variant variant_from_name(const std::string& name) {
  if (name == "vdp") return Variant::VdpBidirectionalY;
  if (name == "vdpl") return Variant::VdplUnidirectionalX;
  throw ConfigError("unknown variant '" + name + "' (expected vdp or vdpl)");
}

void LatticeParams::validate() const {
  if (n < 3 || n % 2 == 0)
    throw ConfigError("lattice side must be odd and >= 3, got " +
                      std::to_string(n));
  if (!(nu > 0.0)) throw ConfigError("nu must be positive");
  if (!(b > 0.0)) throw ConfigError("b must be positive");
}

Eigen::VectorXd LatticeState::stacked() const {
  Eigen::VectorXd v(x.size() + y.size());
  v << x, y;
  return v;
}

LatticeState LatticeState::from_stacked(const Eigen::VectorXd& v) {
  if (v.size() % 2 != 0)
    throw std::invalid_argument("stacked state has odd length");
  LatticeState s;
  const Eigen::Index m = v.size() / 2;
  s.x = v.head(m);
  s.y = v.tail(m);
  return s;
}

}  // namespace torushopf
