#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hampack/error.hpp"
#include "hampack/matching.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hampack {

namespace {

using Int128 = __int128;
using UInt128 = unsigned __int128;

// Three primes whose product (~2^185) exceeds any permanent with N <= 30.
constexpr std::array<std::uint64_t, 3> kPrimes{2305843009213693951ULL, 4611686018427387847ULL,
                                               4611686018427387817ULL};

struct RyserInput {
  int n = 0;
  std::vector<std::uint32_t> rows;  // column mask per row
  bool fits_int128 = false;
};

RyserInput prepare(const BipartiteGraph& g) {
  if (g.left_size() != g.right_size()) throw InvalidInput("permanent needs a square biadjacency matrix");
  const int n = g.left_size();
  if (n > kPermanentLimit)
    throw SizeLimit("permanent limited to N <= " + std::to_string(kPermanentLimit) + ", got " + std::to_string(n));
  RyserInput in;
  in.n = n;
  in.rows.resize(static_cast<std::size_t>(n));
  double log2_bound = n;
  for (int a = 0; a < n; ++a) {
    std::uint32_t mask = 0;
    g.left_neighbors(a).for_each([&](int b) { mask |= std::uint32_t{1} << b; });
    in.rows[a] = mask;
    log2_bound += std::log2(std::max(1, std::popcount(mask)));
  }
  // |sum| <= 2^N * prod(row degrees); keep a margin below 2^127.
  in.fits_int128 = log2_bound < 125.0;
  return in;
}

/// Partial Ryser sum over Gray-code indices [k0, k1), k0 >= 1. The subset for
/// index k is gray(k) = k ^ (k >> 1).
struct Partial {
  Int128 exact = 0;
  std::array<std::uint64_t, 3> mod{};
};

Partial ryser_range(const RyserInput& in, std::uint64_t k0, std::uint64_t k1) {
  const int n = in.n;
  std::array<int, 32> rowsum{};
  std::uint64_t gray = k0 ^ (k0 >> 1);
  for (int i = 0; i < n; ++i) rowsum[i] = std::popcount(in.rows[i] & static_cast<std::uint32_t>(gray));

  Partial part;
  auto accumulate = [&](std::uint64_t subset) {
    const bool negative = (std::popcount(subset) & 1) != 0;
    if (in.fits_int128) {
      Int128 term = 1;
      for (int i = 0; i < n && term != 0; ++i) term *= rowsum[i];
      part.exact += negative ? -term : term;
    } else {
      // Row sums are at most 30 < 2^5, so twelve of them multiply exactly in
      // 64 bits; reduce once per block of twelve.
      std::array<std::uint64_t, 3> blocks{};
      int nblocks = 0;
      std::uint64_t acc = 1;
      for (int i = 0; i < n; ++i) {
        if (rowsum[i] == 0) return;
        acc *= static_cast<std::uint64_t>(rowsum[i]);
        if (i % 12 == 11 || i == n - 1) {
          blocks[static_cast<std::size_t>(nblocks++)] = acc;
          acc = 1;
        }
      }
      for (std::size_t q = 0; q < kPrimes.size(); ++q) {
        const std::uint64_t p = kPrimes[q];
        UInt128 term = blocks[0] % p;
        for (int b = 1; b < nblocks; ++b) term = term * blocks[static_cast<std::size_t>(b)] % p;
        const auto t = static_cast<std::uint64_t>(term);
        part.mod[q] = negative ? (part.mod[q] + p - t) % p : (part.mod[q] + t) % p;
      }
    }
  };

  accumulate(gray);
  for (std::uint64_t k = k0 + 1; k < k1; ++k) {
    const int col = std::countr_zero(k);
    const std::uint64_t next = k ^ (k >> 1);
    const bool added = (next >> col) & 1U;
    for (int i = 0; i < n; ++i)
      if ((in.rows[i] >> col) & 1U) rowsum[i] += added ? 1 : -1;
    gray = next;
    accumulate(gray);
  }
  return part;
}

BigInt to_big(Int128 v) {
  const bool negative = v < 0;
  UInt128 u = negative ? static_cast<UInt128>(-v) : static_cast<UInt128>(v);
  BigInt out = static_cast<std::uint64_t>(u >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(u);
  return negative ? BigInt(-out) : out;
}

BigInt finish(const RyserInput& in, const std::vector<Partial>& parts) {
  const bool flip = (in.n & 1) != 0;  // overall factor (-1)^N
  if (in.fits_int128) {
    Int128 total = 0;
    for (const auto& p : parts) total += p.exact;
    return to_big(flip ? -total : total);
  }
  // Chinese remaindering; the permanent is non-negative and below the modulus.
  BigInt modulus = 1;
  BigInt value = 0;
  for (std::size_t q = 0; q < kPrimes.size(); ++q) {
    const std::uint64_t p = kPrimes[q];
    std::uint64_t r = 0;
    for (const auto& part : parts) r = static_cast<std::uint64_t>((static_cast<UInt128>(r) + part.mod[q]) % p);
    if (flip) r = (p - r) % p;
    // value + modulus * t == r (mod p)
    const auto cur = static_cast<std::uint64_t>(value % p);
    const auto mod_p = static_cast<std::uint64_t>(modulus % p);
    // modular inverse of mod_p by Fermat
    auto powmod = [p](std::uint64_t b, std::uint64_t e) {
      UInt128 result = 1;
      UInt128 base = b % p;
      while (e) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
      }
      return static_cast<std::uint64_t>(result);
    };
    const std::uint64_t diff = (r + p - cur) % p;
    const auto t = static_cast<std::uint64_t>(static_cast<UInt128>(diff) * powmod(mod_p, p - 2) % p);
    value += modulus * t;
    modulus *= p;
  }
  return value;
}

bool has_empty_row(const RyserInput& in) {
  for (auto r : in.rows)
    if (r == 0) return true;
  return false;
}

}  // namespace

BigInt count_pms_reference(const BipartiteGraph& g) {
  const RyserInput in = prepare(g);
  if (in.n == 0) return 1;
  if (has_empty_row(in)) return 0;
  const std::uint64_t total = std::uint64_t{1} << in.n;
  return finish(in, {ryser_range(in, 1, total)});
}

BigInt count_pms(const BipartiteGraph& g) {
  const RyserInput in = prepare(g);
  if (in.n == 0) return 1;
  if (has_empty_row(in)) return 0;
  const std::uint64_t total = std::uint64_t{1} << in.n;
  if (in.n < 12) return finish(in, {ryser_range(in, 1, total)});

  const std::int64_t chunks = 256;
  const std::uint64_t span = (total - 1 + chunks - 1) / chunks;
  std::vector<Partial> parts(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::uint64_t k0 = 1 + static_cast<std::uint64_t>(c) * span;
    const std::uint64_t k1 = std::min(total, k0 + span);
    if (k0 < k1) parts[static_cast<std::size_t>(c)] = ryser_range(in, k0, k1);
  }
  return finish(in, parts);
}

}  // namespace hampack
