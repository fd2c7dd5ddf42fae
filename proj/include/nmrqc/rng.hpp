#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "nmrqc/constants.hpp"

namespace nmrqc {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stateless generator: value i of stream s depends only on (seed, s, i), so any
// split of the index range across workers reproduces the same numbers.
struct CounterRng {
  std::uint64_t seed = 0;

  std::uint64_t bits(std::uint64_t stream, std::uint64_t i) const {
    return splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ (i * 0xd1b54a32d192ed03ULL));
  }
  // uniform on (0, 1]
  double uniform(std::uint64_t stream, std::uint64_t i) const {
    return (static_cast<double>(bits(stream, i) >> 11) + 1.0) * 0x1.0p-53;
  }
  // two independent standard normals from draw i (Box-Muller)
  std::pair<double, double> normal_pair(std::uint64_t stream, std::uint64_t i) const {
    const double r = std::sqrt(-2.0 * std::log(uniform(stream, 2 * i)));
    const double t = constants::two_pi * uniform(stream, 2 * i + 1);
    return {r * std::cos(t), r * std::sin(t)};
  }
};

}  // namespace nmrqc
