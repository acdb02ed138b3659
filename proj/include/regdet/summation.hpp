#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace regdet {

/// Neumaier's variant of Kahan summation. Unlike plain Kahan it stays exact
/// when an incoming term is larger in magnitude than the running sum.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double initial) : sum_(initial) {}

  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.compensation_);
  }

  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Number of worker threads used by chunked reductions. Defaults to the
/// hardware concurrency; results never depend on this value.
unsigned worker_count() noexcept;
void set_worker_count(unsigned workers) noexcept;

namespace detail {
void run_chunks(std::size_t chunk_count, const std::function<void(std::size_t)>& job);
}  // namespace detail

/// Splits [0, count) into fixed-size chunks, evaluates `chunk_fn(begin, end)`
/// for each chunk (possibly concurrently) and merges the partial results in
/// chunk order. Because the chunk boundaries and merge order depend only on
/// `count` and `chunk_size`, the result is bit-identical for any worker count.
template <typename T, typename ChunkFn, typename MergeFn>
T chunked_reduce(std::size_t count, std::size_t chunk_size, ChunkFn&& chunk_fn, MergeFn&& merge, T init) {
  if (count == 0) return init;
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t chunks = (count + chunk_size - 1) / chunk_size;
  std::vector<T> partials(chunks);
  detail::run_chunks(chunks, [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    const std::size_t end = std::min(count, begin + chunk_size);
    partials[c] = chunk_fn(begin, end);
  });
  for (auto& p : partials) merge(init, p);
  return init;
}

/// Deterministic compensated sum of `term(i)` for i in [0, count).
template <typename TermFn>
CompensatedSum chunked_sum(std::size_t count, std::size_t chunk_size, TermFn&& term) {
  return chunked_reduce<CompensatedSum>(
      count, chunk_size,
      [&](std::size_t begin, std::size_t end) {
        CompensatedSum acc;
        for (std::size_t i = begin; i < end; ++i) acc += term(i);
        return acc;
      },
      [](CompensatedSum& into, const CompensatedSum& part) { into.merge(part); }, CompensatedSum{});
}

}  // namespace regdet
