#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tbi {

// One 0/1 entry per vertex (or per mode after threshold mapping).
// Index 0 is the leftmost character of the printed form.
using Bitstring = std::vector<std::uint8_t>;

int popcount(const Bitstring& x);

std::string to_string(const Bitstring& x);

// Throws std::invalid_argument on characters other than '0'/'1'.
Bitstring bitstring_from_string(const std::string& s);

}  // namespace tbi
