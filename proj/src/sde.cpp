#include "opo/sde.hpp"

#include <stdexcept>

namespace opo {

SystemKind parse_system_kind(const std::string& name) {
  if (name == "full") return SystemKind::full;
  if (name == "adiabatic") return SystemKind::adiabatic;
  if (name == "reduced") return SystemKind::reduced;
  throw std::invalid_argument("unknown system '" + name + "' (full|adiabatic|reduced)");
}

std::string to_string(SystemKind k) {
  switch (k) {
    case SystemKind::full: return "full";
    case SystemKind::adiabatic: return "adiabatic";
    case SystemKind::reduced: return "reduced";
  }
  return "?";
}

}  // namespace opo
