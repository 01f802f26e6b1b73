#pragma once
// Segmented factor sieve. Streams every prime p <= limit in ascending order,
// optionally with the complete factorization of p - 1 attached. Factoring
// works inside the same segment pass: base primes q <= sqrt(hi) are divided
// out of each p - 1 in the window, and whatever cofactor remains above 1 is
// itself prime (and, being the largest divisor left, the largest prime
// factor). Multi-threaded runs hand segments to workers and re-serialize the
// results in segment order, so output is identical for any thread count.

#include <cstdint>
#include <memory>
#include <vector>

#include "spl/arith.hpp"

namespace spl {

struct SieveConfig {
  std::uint64_t max_limit = std::uint64_t(1) << 42;   // capacity guard
  std::size_t segment_bytes = std::size_t(64) << 20;  // working memory per segment
  unsigned threads = 1;
};

// Integers covered by one segment: segment_bytes / 16, the budget being
// ~16 bytes of transient working state per candidate integer.
std::uint64_t segment_span(const SieveConfig& cfg);

struct SegmentPlan {
  std::uint64_t lo = 0;            // inclusive
  std::uint64_t hi = 0;            // exclusive
  std::size_t segment_bytes = 0;   // budget the span was derived from
};

// Tiles [2, limit] into [lo, hi) windows of at most segment_span integers.
std::vector<SegmentPlan> plan_segments(std::uint64_t limit, const SieveConfig& cfg);

struct FactoredShiftedPrime {
  std::uint64_t p = 0;
  std::uint64_t lpf = 1;            // largest prime factor of p - 1; 1 for p == 2
  std::vector<PrimePower> factors;  // ascending q; product of q^k == p - 1
};

namespace detail {
class SievePipeline;
}

// Ascending primes p <= limit.
class PrimeStream {
 public:
  PrimeStream(std::uint64_t limit, const SieveConfig& cfg = {});
  ~PrimeStream();
  PrimeStream(PrimeStream&&) noexcept;
  PrimeStream& operator=(PrimeStream&&) noexcept;

  bool next(std::uint64_t& p);  // false once exhausted

 private:
  std::unique_ptr<detail::SievePipeline> pipe_;
};

// Ascending primes p <= limit with factored p - 1.
class FactoredPrimeStream {
 public:
  FactoredPrimeStream(std::uint64_t limit, const SieveConfig& cfg = {});
  ~FactoredPrimeStream();
  FactoredPrimeStream(FactoredPrimeStream&&) noexcept;
  FactoredPrimeStream& operator=(FactoredPrimeStream&&) noexcept;

  // Overwrites rec (reusing its factor storage); false once exhausted.
  bool next(FactoredShiftedPrime& rec);

 private:
  std::unique_ptr<detail::SievePipeline> pipe_;
};

// Convenience wrappers over the streams.
std::vector<std::uint64_t> enumerate_primes(std::uint64_t limit, const SieveConfig& cfg = {});
std::uint64_t count_primes(std::uint64_t limit, const SieveConfig& cfg = {});

// pi(x; m, 1): primes p <= x with p ≡ 1 (mod m). m >= 1.
std::uint64_t primes_in_progression_count(std::uint64_t x, std::uint64_t m,
                                          const SieveConfig& cfg = {});

}  // namespace spl
