#include "spl/checkpoint.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

namespace spl {

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

void write_record(std::ostream& os, const FactoredShiftedPrime& rec) {
  put_u64(os, rec.p);
  if (rec.factors.size() > 0xff)
    throw std::invalid_argument("checkpoint: factor count does not fit a byte");
  const char cnt = static_cast<char>(rec.factors.size());
  os.write(&cnt, 1);
  for (const auto& [q, k] : rec.factors) {
    put_u64(os, q);
    if (k > 0xff) throw std::invalid_argument("checkpoint: multiplicity does not fit a byte");
    const char kb = static_cast<char>(k);
    os.write(&kb, 1);
  }
}

}  // namespace

void write_checkpoint(std::ostream& os, FactoredPrimeStream& stream) {
  const char v = static_cast<char>(kCheckpointVersion);
  os.write(&v, 1);
  FactoredShiftedPrime rec;
  while (stream.next(rec)) write_record(os, rec);
  if (!os) throw std::runtime_error("checkpoint: write failed");
}

void write_checkpoint(std::ostream& os, const std::vector<FactoredShiftedPrime>& recs) {
  const char v = static_cast<char>(kCheckpointVersion);
  os.write(&v, 1);
  for (const auto& rec : recs) write_record(os, rec);
  if (!os) throw std::runtime_error("checkpoint: write failed");
}

CheckpointReader::CheckpointReader(std::istream& is) : is_(is) {
  char v = 0;
  if (!is_.read(&v, 1)) throw std::runtime_error("checkpoint: empty stream");
  if (static_cast<unsigned char>(v) != kCheckpointVersion)
    throw std::runtime_error("checkpoint: unsupported version byte");
}

bool CheckpointReader::next(FactoredShiftedPrime& rec) {
  unsigned char buf[8];
  if (!is_.read(reinterpret_cast<char*>(buf), 8)) {
    if (is_.gcount() == 0) return false;  // clean end between records
    throw std::runtime_error("checkpoint: truncated record");
  }
  std::uint64_t p = 0;
  for (int i = 0; i < 8; ++i) p |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  unsigned char cnt;
  if (!is_.read(reinterpret_cast<char*>(&cnt), 1))
    throw std::runtime_error("checkpoint: truncated record");
  rec.p = p;
  rec.factors.clear();
  for (unsigned i = 0; i < cnt; ++i) {
    unsigned char fbuf[9];
    if (!is_.read(reinterpret_cast<char*>(fbuf), 9))
      throw std::runtime_error("checkpoint: truncated factor list");
    std::uint64_t q = 0;
    for (int j = 0; j < 8; ++j) q |= static_cast<std::uint64_t>(fbuf[j]) << (8 * j);
    rec.factors.push_back({q, fbuf[8]});
  }
  rec.lpf = rec.factors.empty() ? 1 : rec.factors.back().q;
  return true;
}

std::vector<FactoredShiftedPrime> read_checkpoint(std::istream& is) {
  CheckpointReader reader(is);
  std::vector<FactoredShiftedPrime> out;
  FactoredShiftedPrime rec;
  while (reader.next(rec)) out.push_back(rec);
  return out;
}

}  // namespace spl
