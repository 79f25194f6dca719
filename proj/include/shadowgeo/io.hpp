#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace shadowgeo {

/// Shortest decimal text that round-trips to the same double; "inf",
/// "-inf" and "nan" for non-finite values.
std::string format_number(double value);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

std::string hex64(std::uint64_t value);

}  // namespace shadowgeo
