#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace hampack {

using Seed = std::uint64_t;

namespace detail {
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}
}  // namespace detail

/// Child seed for (parent, purpose, index). Every stochastic stage derives its
/// stream this way, so results do not depend on execution order.
constexpr Seed derive_seed(Seed parent, std::string_view purpose, std::uint64_t index = 0) {
  std::uint64_t h = detail::mix64(parent ^ 0x9e3779b97f4a7c15ULL);
  h = detail::mix64(h ^ detail::fnv1a(purpose));
  return detail::mix64(h + 0x9e3779b97f4a7c15ULL * (index + 1));
}

/// Counter-based generator: output k is mix64(key + k * golden). Satisfies
/// UniformRandomBitGenerator so it plugs into <random> distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(Seed key) : key_(detail::mix64(key)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return detail::mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform in [0, bound) by Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    while (true) {
      const unsigned __int128 prod = static_cast<unsigned __int128>((*this)()) * bound;
      const auto low = static_cast<std::uint64_t>(prod);
      if (low >= bound || low >= (0 - bound) % bound) return static_cast<std::uint64_t>(prod >> 64);
    }
  }

  template <class RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    const auto n = last - first;
    for (auto i = n - 1; i > 0; --i) {
      const auto j = static_cast<decltype(i)>(below(static_cast<std::uint64_t>(i) + 1));
      std::swap(first[i], first[j]);
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace hampack
