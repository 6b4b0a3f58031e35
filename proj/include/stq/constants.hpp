#ifndef STQ_CONSTANTS_HPP
#define STQ_CONSTANTS_HPP

namespace stq {

/// Reduced Planck constant in the unit system used throughout:
/// energies in micro-eV, times in nanoseconds.
inline constexpr double hbar_ueV_ns = 0.6582119569;

inline constexpr double pi = 3.14159265358979323846;

} // namespace stq

#endif
