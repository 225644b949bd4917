#pragma once

#include <cstddef>
#include <cstdint>

namespace flawsim {

using StateId = std::uint64_t;
using FlawId = std::size_t;

/// Additive margin used when a probability row must sum to one.
inline constexpr double kRowSumTolerance = 1e-9;

/// Additive margin for every strict inequality in a certificate.
inline constexpr double kCertificateSlack = 1e-9;

/// Default explicit-enumeration cap for generated instances (2^16 states).
inline constexpr std::uint64_t kDefaultExplicitCap = std::uint64_t{1} << 16;

}  // namespace flawsim
