#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hiact {

// 64-bit FNV-1a; stable across platforms, used only to fingerprint configs.
std::uint64_t fnv1a64(std::string_view text);
std::string hash_hex(std::uint64_t value);

}  // namespace hiact
