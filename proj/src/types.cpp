#include "vem/types.hpp"

namespace vem {

Stabilization parse_stabilization(std::string_view name) {
  if (name == "s1") return Stabilization::S1;
  if (name == "s2") return Stabilization::S2;
  if (name == "s2tilde") return Stabilization::S2Tilde;
  if (name == "3d") return Stabilization::Face3D;
  throw InvalidArgument("unknown stabilization '" + std::string(name) + "'");
}

std::string_view to_string(Stabilization s) {
  switch (s) {
    case Stabilization::S1: return "s1";
    case Stabilization::S2: return "s2";
    case Stabilization::S2Tilde: return "s2tilde";
    case Stabilization::Face3D: return "3d";
  }
  return "?";
}

}  // namespace vem
