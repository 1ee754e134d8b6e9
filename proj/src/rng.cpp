#include "fedkrr/rng.hpp"

#include <cmath>

namespace fedkrr::rng {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t key(std::initializer_list<std::uint64_t> words) {
  std::uint64_t k = 0x243f6a8885a308d3ULL;  // arbitrary odd constant
  for (std::uint64_t w : words) k = mix(k ^ mix(w));
  return k;
}

namespace {
// 53-bit mantissa, offset by half an ulp so 0 and 1 are unreachable.
double to_unit(std::uint64_t x) { return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53; }
}  // namespace

double counter_uniform(std::uint64_t k) { return to_unit(mix(k)); }

double counter_normal(std::uint64_t k) {
  double u1 = to_unit(mix(k));
  double u2 = to_unit(mix(k ^ 0x5851f42d4c957f2dULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

std::uint64_t Stream::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t x = state_;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double Stream::uniform() { return to_unit(next_u64()); }

double Stream::normal() {
  double u1 = uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

std::uint64_t Stream::below(std::uint64_t n) {
  // Rejection sampling on the top bits; bias-free.
  std::uint64_t limit = n * (UINT64_MAX / n);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

}  // namespace fedkrr::rng
