#include "spl/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "spl/errors.hpp"

namespace spl {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint64_t> simple_sieve(std::uint64_t n) {
  std::vector<std::uint64_t> primes;
  if (n < 2) return primes;
  std::vector<std::uint8_t> is_prime(n + 1, 1);
  is_prime[0] = is_prime[1] = 0;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (!is_prime[q]) continue;
    for (std::uint64_t v = q * q; v <= n; v += q) is_prime[v] = 0;
  }
  for (std::uint64_t v = 2; v <= n; ++v)
    if (is_prime[v]) primes.push_back(v);
  return primes;
}

}  // namespace

std::uint64_t segment_span(const SieveConfig& cfg) {
  const std::uint64_t span = cfg.segment_bytes / 16;
  return std::clamp<std::uint64_t>(span, std::uint64_t(1) << 14, std::uint64_t(1) << 30);
}

std::vector<SegmentPlan> plan_segments(std::uint64_t limit, const SieveConfig& cfg) {
  std::vector<SegmentPlan> plans;
  if (limit < 2) return plans;
  const std::uint64_t span = segment_span(cfg);
  for (std::uint64_t lo = 2; lo <= limit; lo += span)
    plans.push_back({lo, std::min(lo + span, limit + 1), cfg.segment_bytes});
  return plans;
}

namespace detail {

struct Rec {
  std::uint64_t p;
  std::uint64_t lpf;
  std::uint32_t fbegin;
  std::uint32_t fcount;
};

struct Batch {
  std::vector<Rec> recs;
  std::vector<PrimePower> arena;
};

struct Workspace {
  struct Event {
    std::uint32_t rec;
    std::uint32_t k;
    std::uint64_t q;
  };
  std::vector<std::uint8_t> flags;
  std::vector<std::int32_t> idx;
  std::vector<std::uint64_t> cof;
  std::vector<Event> events;
  std::vector<std::uint32_t> cursor;
};

namespace {

void produce(const SegmentPlan& sp, const std::vector<std::uint64_t>& base,
             bool want_factors, Workspace& ws, Batch& out) {
  const std::uint64_t lo = sp.lo;
  const std::uint64_t hi = sp.hi;
  const auto n = static_cast<std::size_t>(hi - lo);

  ws.flags.assign(n, 1);
  for (std::uint64_t q : base) {
    if (q * q >= hi) break;
    const std::uint64_t start = std::max(q * q, ((lo + q - 1) / q) * q);
    for (std::uint64_t v = start; v < hi; v += q) ws.flags[v - lo] = 0;
  }

  out.recs.clear();
  out.arena.clear();
  if (!want_factors) {
    for (std::size_t i = 0; i < n; ++i)
      if (ws.flags[i]) out.recs.push_back({lo + i, 0, 0, 0});
    return;
  }

  // Factor pass runs over the shifted window of p - 1 values; the value at
  // position i is flo + i, and for prime p = lo + i that position is i itself.
  const std::uint64_t flo = lo - 1;
  ws.idx.assign(n, -1);
  ws.cof.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (!ws.flags[i]) continue;
    ws.idx[i] = static_cast<std::int32_t>(out.recs.size());
    out.recs.push_back({lo + i, 1, 0, 0});
    ws.cof.push_back(flo + i);
  }

  ws.events.clear();
  const std::uint64_t nmax = hi - 2;  // largest p - 1 value in the window
  for (std::uint64_t q : base) {
    if (q > nmax / q) break;
    const std::uint64_t start = std::max(q, ((flo + q - 1) / q) * q);
    for (std::uint64_t v = start; v <= nmax; v += q) {
      const std::int32_t r = ws.idx[v - flo];
      if (r < 0) continue;
      // v is a multiple of q, and divisions by smaller primes cannot have
      // removed any factor of q, so cof[r] is still divisible by q here.
      std::uint64_t m = ws.cof[r] / q;
      std::uint32_t k = 1;
      while (m % q == 0) {
        m /= q;
        ++k;
      }
      ws.cof[r] = m;
      ws.events.push_back({static_cast<std::uint32_t>(r), k, q});
    }
  }

  // Counting sort of events into one contiguous arena, record by record.
  // Events already arrive in ascending-q order per record; a cofactor that
  // stays above 1 is a prime larger than every base prime divided out, so
  // appending it keeps each factor list sorted.
  ws.cursor.assign(out.recs.size(), 0);
  for (const auto& e : ws.events) ws.cursor[e.rec]++;
  for (std::size_t r = 0; r < out.recs.size(); ++r)
    if (ws.cof[r] > 1) ws.cursor[r]++;
  std::uint32_t total = 0;
  for (std::size_t r = 0; r < out.recs.size(); ++r) {
    out.recs[r].fbegin = total;
    out.recs[r].fcount = ws.cursor[r];
    total += ws.cursor[r];
    ws.cursor[r] = out.recs[r].fbegin;
  }
  out.arena.resize(total);
  for (const auto& e : ws.events) out.arena[ws.cursor[e.rec]++] = {e.q, e.k};
  for (std::size_t r = 0; r < out.recs.size(); ++r)
    if (ws.cof[r] > 1) out.arena[ws.cursor[r]++] = {ws.cof[r], 1};
  for (auto& rec : out.recs)
    rec.lpf = rec.fcount ? out.arena[rec.fbegin + rec.fcount - 1].q : 1;
}

}  // namespace

class SievePipeline {
 public:
  SievePipeline(std::uint64_t limit, const SieveConfig& cfg, bool want_factors)
      : want_factors_(want_factors) {
    if (limit > cfg.max_limit)
      throw capacity_error("sieve: limit " + std::to_string(limit) +
                           " exceeds configured max_limit " + std::to_string(cfg.max_limit));
    plans_ = plan_segments(limit, cfg);
    if (!plans_.empty()) base_ = simple_sieve(isqrt(limit));
    threads_ = std::max(1u, cfg.threads);
    window_ = threads_ + 2;
    if (threads_ > 1 && plans_.size() > 1) {
      workers_.reserve(threads_);
      for (unsigned w = 0; w < threads_; ++w)
        workers_.emplace_back([this] { work(); });
    }
  }

  ~SievePipeline() { shutdown(); }

  SievePipeline(const SievePipeline&) = delete;
  SievePipeline& operator=(const SievePipeline&) = delete;

  // Loads the next segment batch in order; false once all are consumed.
  bool advance() {
    rec_i_ = 0;
    if (next_index_ >= plans_.size()) {
      cur_.recs.clear();  // keep next() calls after exhaustion returning false
      cur_.arena.clear();
      return false;
    }
    if (workers_.empty()) {
      produce(plans_[next_index_], base_, want_factors_, inline_ws_, cur_);
      ++next_index_;
      return true;
    }
    std::unique_lock lk(mu_);
    ready_cv_.wait(lk, [this] { return error_ || ready_.count(next_index_) > 0; });
    if (error_) {
      auto err = error_;
      lk.unlock();
      shutdown();
      std::rethrow_exception(err);
    }
    auto node = ready_.extract(next_index_);
    cur_ = std::move(node.mapped());
    ++next_index_;
    slot_cv_.notify_all();
    return true;
  }

  Batch cur_;
  std::size_t rec_i_ = 0;

 private:
  void work() {
    Workspace ws;
    for (;;) {
      std::size_t seg;
      {
        std::unique_lock lk(mu_);
        slot_cv_.wait(lk, [this] {
          return stop_ || claim_next_ >= plans_.size() ||
                 claim_next_ < next_index_ + window_;
        });
        if (stop_ || claim_next_ >= plans_.size()) return;
        seg = claim_next_++;
      }
      Batch b;
      try {
        produce(plans_[seg], base_, want_factors_, ws, b);
      } catch (...) {
        std::lock_guard lk(mu_);
        if (!error_) error_ = std::current_exception();
        ready_cv_.notify_all();
        return;
      }
      std::lock_guard lk(mu_);
      ready_.emplace(seg, std::move(b));
      ready_cv_.notify_all();
    }
  }

  void shutdown() {
    {
      std::lock_guard lk(mu_);
      stop_ = true;
    }
    slot_cv_.notify_all();
    ready_cv_.notify_all();
    for (auto& t : workers_)
      if (t.joinable()) t.join();
    workers_.clear();
  }

  std::vector<SegmentPlan> plans_;
  std::vector<std::uint64_t> base_;
  bool want_factors_;
  unsigned threads_ = 1;
  std::size_t window_ = 3;

  Workspace inline_ws_;  // single-threaded path

  std::mutex mu_;
  std::condition_variable ready_cv_;  // a batch became ready (or an error)
  std::condition_variable slot_cv_;   // the ordered window moved forward
  std::map<std::size_t, Batch> ready_;
  std::size_t next_index_ = 0;   // next segment owed to the consumer
  std::size_t claim_next_ = 0;   // next segment a worker may claim
  bool stop_ = false;
  std::exception_ptr error_;
  std::vector<std::thread> workers_;
};

}  // namespace detail

PrimeStream::PrimeStream(std::uint64_t limit, const SieveConfig& cfg)
    : pipe_(std::make_unique<detail::SievePipeline>(limit, cfg, false)) {}
PrimeStream::~PrimeStream() = default;
PrimeStream::PrimeStream(PrimeStream&&) noexcept = default;
PrimeStream& PrimeStream::operator=(PrimeStream&&) noexcept = default;

bool PrimeStream::next(std::uint64_t& p) {
  while (pipe_->rec_i_ >= pipe_->cur_.recs.size()) {
    if (!pipe_->advance()) return false;
  }
  p = pipe_->cur_.recs[pipe_->rec_i_++].p;
  return true;
}

FactoredPrimeStream::FactoredPrimeStream(std::uint64_t limit, const SieveConfig& cfg)
    : pipe_(std::make_unique<detail::SievePipeline>(limit, cfg, true)) {}
FactoredPrimeStream::~FactoredPrimeStream() = default;
FactoredPrimeStream::FactoredPrimeStream(FactoredPrimeStream&&) noexcept = default;
FactoredPrimeStream& FactoredPrimeStream::operator=(FactoredPrimeStream&&) noexcept = default;

bool FactoredPrimeStream::next(FactoredShiftedPrime& rec) {
  while (pipe_->rec_i_ >= pipe_->cur_.recs.size()) {
    if (!pipe_->advance()) return false;
  }
  const auto& r = pipe_->cur_.recs[pipe_->rec_i_++];
  rec.p = r.p;
  rec.lpf = r.lpf;
  const auto* src = pipe_->cur_.arena.data() + r.fbegin;
  rec.factors.assign(src, src + r.fcount);
  return true;
}

std::vector<std::uint64_t> enumerate_primes(std::uint64_t limit, const SieveConfig& cfg) {
  std::vector<std::uint64_t> out;
  PrimeStream st(limit, cfg);
  std::uint64_t p;
  while (st.next(p)) out.push_back(p);
  return out;
}

std::uint64_t count_primes(std::uint64_t limit, const SieveConfig& cfg) {
  PrimeStream st(limit, cfg);
  std::uint64_t p, n = 0;
  while (st.next(p)) ++n;
  return n;
}

std::uint64_t primes_in_progression_count(std::uint64_t x, std::uint64_t m,
                                          const SieveConfig& cfg) {
  if (m == 0) throw std::invalid_argument("primes_in_progression_count: m must be >= 1");
  PrimeStream st(x, cfg);
  std::uint64_t p, n = 0;
  while (st.next(p))
    if ((p - 1) % m == 0) ++n;
  return n;
}

}  // namespace spl
