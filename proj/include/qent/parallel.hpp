#pragma once

// Deterministic data parallelism over an indexed list of independent points.
// Each result is written to its own slot, so the output never depends on the
// number of workers or on scheduling.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qent {

/// A worker failed on one point; carries the index of that point.
class PointError : public std::runtime_error {
 public:
  PointError(std::size_t index, const std::string& what)
      : std::runtime_error("point " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Worker count used when the caller passes 0.
inline std::size_t default_workers() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Calls fn(i) for every i in [0, n) on up to `workers` threads (0 means all
/// hardware threads). If any call throws, remaining points are skipped and a
/// PointError for the lowest failing index is thrown.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t workers = 0) {
  if (n == 0) return;
  if (workers == 0) workers = default_workers();
  workers = std::min(workers, n);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::optional<std::size_t> error_index;
  std::string error_text;

  auto run = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        fn(i);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!error_index || i < *error_index) {
          error_index = i;
          error_text = e.what();
        }
        failed = true;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error_index || i < *error_index) {
          error_index = i;
          error_text = "unknown exception";
        }
        failed = true;
      }
    }
  };

  if (workers == 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
  }  // jthreads join here
  if (error_index) throw PointError(*error_index, error_text);
}

/// Maps `worker` over `points`, returning results in input order.
template <class Point, class Worker>
auto parallel_map(const std::vector<Point>& points, Worker&& worker, std::size_t workers = 0) {
  using Result = std::decay_t<decltype(worker(points.front()))>;
  std::vector<std::optional<Result>> slots(points.size());
  parallel_for(
      points.size(), [&](std::size_t i) { slots[i].emplace(worker(points[i])); }, workers);
  std::vector<Result> out;
  out.reserve(points.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace qent
