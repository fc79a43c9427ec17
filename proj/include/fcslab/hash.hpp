#ifndef FCSLAB_HASH_HPP
#define FCSLAB_HASH_HPP

#include <cstdint>
#include <string>

namespace fcslab {

// FNV-1a, used for cache keys and model fingerprints (not cryptographic).
inline std::uint64_t fnv1a64(const void* data, std::size_t size,
                             std::uint64_t seed = 14695981039346656037ull) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s,
                             std::uint64_t seed = 14695981039346656037ull) {
  return fnv1a64(s.data(), s.size(), seed);
}

std::string to_hex(std::uint64_t value);

}  // namespace fcslab

#endif
