#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace posit {

// Spin configurations are bit strings, bit 0 <-> S^z = +1/2. Dense vectors are
// indexed with site 0 as the most significant bit.

using Configuration = std::vector<std::uint8_t>;

inline std::uint64_t basis_index(std::span<const std::uint8_t> bits) {
  if (bits.size() > 63) throw std::invalid_argument("configuration too long for a dense index");
  std::uint64_t idx = 0;
  for (auto b : bits) idx = (idx << 1) | (b & 1U);
  return idx;
}

inline Configuration basis_bits(std::uint64_t index, std::size_t n_sites) {
  Configuration bits(n_sites);
  for (std::size_t k = 0; k < n_sites; ++k) bits[n_sites - 1 - k] = static_cast<std::uint8_t>((index >> k) & 1U);
  return bits;
}

/// Bit of `site` inside a dense index over `n_sites` sites.
inline int site_bit(std::uint64_t index, std::size_t site, std::size_t n_sites) {
  return static_cast<int>((index >> (n_sites - 1 - site)) & 1U);
}

}  // namespace posit
