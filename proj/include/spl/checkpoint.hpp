#pragma once
// Binary checkpoint for factored shifted primes. Layout: one version byte
// (0x01), then per record p (u64 LE), factor count (u8), and factor pairs of
// q (u64 LE) and multiplicity k (u8). Records appear in ascending p.

#include <iosfwd>
#include <vector>

#include "spl/sieve.hpp"

namespace spl {

inline constexpr unsigned char kCheckpointVersion = 0x01;

void write_checkpoint(std::ostream& os, FactoredPrimeStream& stream);
void write_checkpoint(std::ostream& os, const std::vector<FactoredShiftedPrime>& recs);

class CheckpointReader {
 public:
  explicit CheckpointReader(std::istream& is);  // validates the version byte
  bool next(FactoredShiftedPrime& rec);         // false at clean end of stream

 private:
  std::istream& is_;
};

std::vector<FactoredShiftedPrime> read_checkpoint(std::istream& is);

}  // namespace spl
