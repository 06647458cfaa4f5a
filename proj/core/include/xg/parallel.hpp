#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace xg {

/// Resolves a thread-count request: 0 means "all hardware threads".
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Runs `work(chunk)` for chunk = 0..chunks-1 on up to `threads` workers.
///
/// The chunk grid must not depend on the thread count; workers pull chunk
/// indices from a shared counter and each chunk's result may only be written
/// to its own slot. Combined with an index-ordered merge on the caller side
/// this makes results independent of scheduling.
template <class Fn>
void for_each_chunk(std::size_t chunks, unsigned threads, Fn&& work) {
  threads = resolve_threads(threads);
  if (chunks == 0) return;
  if (threads <= 1 || chunks == 1) {
    for (std::size_t i = 0; i < chunks; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= chunks) return;
      work(i);
    }
  };
  std::vector<std::thread> pool;
  const unsigned n_workers = static_cast<unsigned>(
      std::min<std::size_t>(threads, chunks));
  pool.reserve(n_workers - 1);
  for (unsigned t = 1; t < n_workers; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
}

/// Map over chunks, then reduce the per-chunk results in index order.
template <class R, class Map, class Reduce>
R chunked_reduce(std::size_t chunks, unsigned threads, Map&& map, Reduce&& reduce) {
  std::vector<R> results(chunks);
  for_each_chunk(chunks, threads,
                 [&](std::size_t i) { results[i] = map(i); });
  R acc = results[0];
  for (std::size_t i = 1; i < chunks; ++i) acc = reduce(std::move(acc), results[i]);
  return acc;
}

/// Compensated (Kahan) sum; order-stable and far below 1e-12 drift for the
/// matrix sizes this library touches.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace xg
