#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>

namespace symtdd::detail {

inline std::size_t hash_mix(std::size_t seed, std::uint64_t value) {
  value *= 0x9e3779b97f4a7c15ULL;
  value ^= value >> 32;
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline std::size_t hash_complex(std::size_t seed, std::complex<double> c) {
  seed = hash_mix(seed, std::bit_cast<std::uint64_t>(c.real()));
  return hash_mix(seed, std::bit_cast<std::uint64_t>(c.imag()));
}

}  // namespace symtdd::detail
