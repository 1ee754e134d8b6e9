#pragma once

#include <cstdint>
#include <initializer_list>

namespace fedkrr::rng {

// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix(std::uint64_t x);

// Folds a list of words into one key; order-sensitive.
std::uint64_t key(std::initializer_list<std::uint64_t> words);

// Stateless draws addressed purely by key words, so path j's stream is
// independent of how many paths are simulated and of thread scheduling.
double counter_uniform(std::uint64_t k);   // strictly inside (0,1)
double counter_normal(std::uint64_t k);    // standard normal (Box-Muller)

// Sequential generator for one-off sampling (feature maps, teachers, attacks).
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  double uniform();                 // strictly inside (0,1)
  double normal();                  // standard normal
  std::uint64_t below(std::uint64_t n);  // uniform on {0,...,n-1}

 private:
  std::uint64_t state_;
};

}  // namespace fedkrr::rng
