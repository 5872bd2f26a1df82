#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <string>

namespace isocone {

enum class Method { automatic, exact, dykstra, pava };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::automatic: return "auto";
    case Method::exact: return "exact";
    case Method::dykstra: return "dykstra";
    case Method::pava: return "pava";
  }
  return "unknown";
}

/// Dimension cap for the exact, enumerative geometry routines. ISOCONE_DMAX overrides the default of 8.
inline std::size_t default_max_dim() {
  if (const char* env = std::getenv("ISOCONE_DMAX")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 8;
}

struct Config {
  Method method = Method::automatic;
  double tol = 1e-9;            // membership / KKT / Dykstra tolerance
  double strict_tol = 1e-7;     // margin for declaring a point interior
  long max_iter = 100000;       // Dykstra cycles
  std::size_t max_dim = default_max_dim();
  std::size_t starts = 64;      // multi-start count for the interior search
  std::uint64_t seed = 0;
};

}  // namespace isocone
