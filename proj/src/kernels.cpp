#include "symjunta/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace symjunta::kernels {
namespace {

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void check_power_of_two(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("walsh_hadamard: size must be a power of 2");
}

void merge_sorted_capped(std::vector<std::uint64_t>& into, const std::vector<std::uint64_t>& from) {
  into.insert(into.end(), from.begin(), from.end());
  std::sort(into.begin(), into.end());
  if (into.size() > kMaxListed) into.resize(kMaxListed);
}

std::uint64_t parity_pattern(int k) {
  std::uint64_t p = 0;
  for (int w = 1; w <= k; w += 2) p |= std::uint64_t{1} << w;
  return p;
}

}  // namespace

// ------------------------------------------------------------ Walsh-Hadamard

void walsh_hadamard_serial(std::span<std::int64_t> data) {
  check_power_of_two(data.size());
  for (std::size_t h = 1; h < data.size(); h <<= 1) {
    for (std::size_t i = 0; i < data.size(); i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const std::int64_t a = data[j], b = data[j + h];
        data[j] = a + b;
        data[j + h] = a - b;
      }
    }
  }
}

void walsh_hadamard_parallel(std::span<std::int64_t> data) {
  check_power_of_two(data.size());
  const auto n = static_cast<std::int64_t>(data.size());
  const bool big = n >= 8192;
  std::int64_t* d = data.data();
  for (std::int64_t h = 1; h < n; h <<= 1) {
    const std::int64_t blocks = n / (2 * h);
    if (blocks >= 64) {
      // Many short blocks: one block per iteration.
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (big)
#endif
      for (std::int64_t b = 0; b < blocks; ++b) {
        std::int64_t* p = d + b * 2 * h;
        for (std::int64_t j = 0; j < h; ++j) {
          const std::int64_t x = p[j], y = p[j + h];
          p[j] = x + y;
          p[j + h] = x - y;
        }
      }
    } else {
      // Few long blocks: split each block's butterflies.
      for (std::int64_t b = 0; b < blocks; ++b) {
        std::int64_t* p = d + b * 2 * h;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (big)
#endif
        for (std::int64_t j = 0; j < h; ++j) {
          const std::int64_t x = p[j], y = p[j + h];
          p[j] = x + y;
          p[j + h] = x - y;
        }
      }
    }
  }
}

// ------------------------------------------------------------ min-order tally

MinOrderTally::MinOrderTally(int arity, int bound_)
    : k(arity), bound(bound_), histogram(static_cast<std::size_t>(arity) + 1, 0) {}

void MinOrderTally::merge(const MinOrderTally& other) {
  if (other.k != k || other.bound != bound) throw std::invalid_argument("MinOrderTally::merge: mismatched tallies");
  for (std::size_t i = 0; i < histogram.size(); ++i) histogram[i] += other.histogram[i];
  visited += other.visited;
  if (other.max_order > max_order) {
    max_order = other.max_order;
    argmax = other.argmax;
    argmax_count = other.argmax_count;
  } else if (other.max_order == max_order) {
    merge_sorted_capped(argmax, other.argmax);
    argmax_count += other.argmax_count;
  }
  merge_sorted_capped(counterexamples, other.counterexamples);
  counterexample_count += other.counterexample_count;
}

MinOrderTally tally_min_orders_serial(const LevelTable& table, int bound, IndexRange range) {
  const int k = table.arity();
  MinOrderTally tally(k, bound);
  const std::uint64_t all = (std::uint64_t{1} << (k + 1)) - 1;
  const std::uint64_t par = parity_pattern(k);
  for (std::uint64_t idx = range.begin; idx < range.end; ++idx) {
    ++tally.visited;
    int order = 0;
    for (int l = 1; l <= k && order == 0; ++l) {
      auto row = table.row(l);
      std::int64_t acc = 0;
      for (std::uint64_t bits = idx; bits; bits &= bits - 1) acc += row[std::countr_zero(bits)];
      if (acc != 0) order = l;
    }
    ++tally.histogram[order];
    const bool exceptional = idx == 0 || idx == all || idx == par || idx == (all ^ par);
    if (exceptional) continue;
    if (order > tally.max_order) {
      tally.max_order = order;
      tally.argmax.clear();
      tally.argmax_count = 0;
    }
    if (order == tally.max_order) {
      ++tally.argmax_count;
      if (tally.argmax.size() < kMaxListed) tally.argmax.push_back(idx);
    }
    if (order > bound) {
      ++tally.counterexample_count;
      if (tally.counterexamples.size() < kMaxListed) tally.counterexamples.push_back(idx);
    }
  }
  return tally;
}

MinOrderTally tally_min_orders_parallel(const LevelTable& table, int bound, IndexRange range) {
  const std::uint64_t span = range.end > range.begin ? range.end - range.begin : 0;
  const auto chunks = static_cast<std::int64_t>(
      std::clamp<std::uint64_t>(span / 4096, 1, static_cast<std::uint64_t>(thread_count()) * 16));
  std::vector<MinOrderTally> partial(static_cast<std::size_t>(chunks));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::uint64_t lo = range.begin + span * static_cast<std::uint64_t>(c) / chunks;
    const std::uint64_t hi = range.begin + span * static_cast<std::uint64_t>(c + 1) / chunks;
    partial[static_cast<std::size_t>(c)] = tally_min_orders_serial(table, bound, {lo, hi});
  }
  MinOrderTally total(table.arity(), bound);
  for (const auto& p : partial) total.merge(p);
  return total;
}

// ------------------------------------------------------------- ExampleMatrix

ExampleMatrix::ExampleMatrix(int n, std::size_t m)
    : n_(n),
      m_(m),
      words_((m + 63) / 64),
      columns_(static_cast<std::size_t>(n) * words_, 0),
      labels_(words_, 0) {}

void ExampleMatrix::set(std::size_t example, int var, bool bit) {
  const std::uint64_t mask = std::uint64_t{1} << (example % 64);
  auto& word = columns_[static_cast<std::size_t>(var) * words_ + example / 64];
  word = bit ? (word | mask) : (word & ~mask);
}

void ExampleMatrix::set_label(std::size_t example, bool label) {
  const std::uint64_t mask = std::uint64_t{1} << (example % 64);
  auto& word = labels_[example / 64];
  word = label ? (word | mask) : (word & ~mask);
}

std::uint64_t ExampleMatrix::positives() const noexcept {
  std::uint64_t count = 0;
  for (auto w : labels_) count += static_cast<std::uint64_t>(std::popcount(w));
  return count;
}

std::int64_t correlation_sum(const ExampleMatrix& examples, std::span<const int> vars) {
  const auto labels = examples.labels();
  std::uint64_t odd = 0;
  for (std::size_t w = 0; w < examples.words(); ++w) {
    std::uint64_t p = 0;
    for (int v : vars) p ^= examples.column(v)[w];
    odd += static_cast<std::uint64_t>(std::popcount(p & labels[w]));
  }
  return static_cast<std::int64_t>(examples.positives()) - 2 * static_cast<std::int64_t>(odd);
}

std::vector<std::int64_t> level_sums_serial(const ExampleMatrix& examples, std::span<const int> subsets,
                                            int width) {
  const std::size_t count = width == 0 ? 1 : subsets.size() / static_cast<std::size_t>(width);
  std::vector<std::int64_t> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = correlation_sum(examples, subsets.subspan(i * width, static_cast<std::size_t>(width)));
  }
  return out;
}

std::vector<std::int64_t> level_sums_parallel(const ExampleMatrix& examples, std::span<const int> subsets,
                                              int width) {
  const std::size_t count = width == 0 ? 1 : subsets.size() / static_cast<std::size_t>(width);
  std::vector<std::int64_t> out(count);
  const auto n = static_cast<std::int64_t>(count);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n >= 64)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    const auto first = static_cast<std::size_t>(i) * static_cast<std::size_t>(width);
    out[static_cast<std::size_t>(i)] =
        correlation_sum(examples, subsets.subspan(first, static_cast<std::size_t>(width)));
  }
  return out;
}

// --------------------------------------------------------------------- sieve

namespace {

constexpr std::uint64_t kSegment = std::uint64_t{1} << 18;

std::vector<std::uint64_t> base_primes(std::uint64_t limit) {
  std::vector<std::uint8_t> composite(limit + 1, 0);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return primes;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

void sieve_segment(std::uint64_t lo, std::uint64_t hi, const std::vector<std::uint64_t>& base,
                   std::vector<std::uint64_t>& out) {
  std::vector<std::uint8_t> composite(hi - lo + 1, 0);
  for (std::uint64_t p : base) {
    if (p * p > hi) break;
    std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
    for (std::uint64_t j = start; j <= hi; j += p) composite[j - lo] = 1;
  }
  for (std::uint64_t v = lo; v <= hi; ++v) {
    if (!composite[v - lo]) out.push_back(v);
  }
}

}  // namespace

std::vector<std::uint64_t> sieve_serial(std::uint64_t lo, std::uint64_t hi) {
  lo = std::max<std::uint64_t>(lo, 2);
  std::vector<std::uint64_t> out;
  if (hi < lo) return out;
  const auto base = base_primes(isqrt(hi));
  for (std::uint64_t s = lo; s <= hi; s += kSegment) {
    sieve_segment(s, std::min(hi, s + kSegment - 1), base, out);
  }
  return out;
}

std::vector<std::uint64_t> sieve_parallel(std::uint64_t lo, std::uint64_t hi) {
  lo = std::max<std::uint64_t>(lo, 2);
  if (hi < lo) return {};
  const auto base = base_primes(isqrt(hi));
  const auto segments = static_cast<std::int64_t>((hi - lo) / kSegment + 1);
  std::vector<std::vector<std::uint64_t>> parts(static_cast<std::size_t>(segments));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t i = 0; i < segments; ++i) {
    const std::uint64_t s = lo + static_cast<std::uint64_t>(i) * kSegment;
    sieve_segment(s, std::min(hi, s + kSegment - 1), base, parts[static_cast<std::size_t>(i)]);
  }
  std::vector<std::uint64_t> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

}  // namespace symjunta::kernels
