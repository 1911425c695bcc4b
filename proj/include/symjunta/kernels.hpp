#pragma once

// Data-parallel inner loops. Every kernel comes as a pair: a plain serial
// reference and an OpenMP version that must produce identical results. The
// library calls the parallel versions; tests compare the two, and bench/
// measures them against each other.

#include <cstdint>
#include <span>
#include <vector>

#include "symjunta/boolfn.hpp"

namespace symjunta::kernels {

// In-place unnormalized Walsh-Hadamard transform:
// data[S] <- sum_x data[x] (-1)^popcount(x & S). data.size() must be a power of 2.
void walsh_hadamard_serial(std::span<std::int64_t> data);
void walsh_hadamard_parallel(std::span<std::int64_t> data);

/// Contiguous slice [begin, end) of the symmetric-function index space.
struct IndexRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
};

inline constexpr std::size_t kMaxListed = 1000;

/// Min-order statistics over a range of symmetric functions of arity k.
/// histogram[0] counts constants ("none"); histogram[l] counts functions with
/// min order l. Extremes only consider non-exceptional functions.
struct MinOrderTally {
  int k = 0;
  int bound = 0;
  std::vector<std::uint64_t> histogram;
  int max_order = 0;
  // Index lists keep the smallest kMaxListed entries; the counts are exact.
  std::vector<std::uint64_t> argmax;           // indices attaining max_order
  std::vector<std::uint64_t> counterexamples;  // min order > bound
  std::uint64_t argmax_count = 0;
  std::uint64_t counterexample_count = 0;
  std::uint64_t visited = 0;

  explicit MinOrderTally(int arity = 0, int bound_ = 0);
  /// Associative merge; keeps index lists sorted so results are order-free.
  void merge(const MinOrderTally& other);
};

MinOrderTally tally_min_orders_serial(const LevelTable& table, int bound, IndexRange range);
MinOrderTally tally_min_orders_parallel(const LevelTable& table, int bound, IndexRange range);

/// Labeled examples in column form: one bitset over examples per variable, so
/// a character sum over S is an XOR of |S| columns plus a popcount.
class ExampleMatrix {
 public:
  ExampleMatrix(int n, std::size_t m);

  void set(std::size_t example, int var, bool bit);
  void set_label(std::size_t example, bool label);

  int vars() const noexcept { return n_; }
  std::size_t examples() const noexcept { return m_; }
  std::size_t words() const noexcept { return words_; }
  std::span<const std::uint64_t> column(int var) const {
    return {columns_.data() + static_cast<std::size_t>(var) * words_, words_};
  }
  std::span<const std::uint64_t> labels() const noexcept { return labels_; }
  std::uint64_t positives() const noexcept;

 private:
  int n_;
  std::size_t m_;
  std::size_t words_;
  std::vector<std::uint64_t> columns_;
  std::vector<std::uint64_t> labels_;
};

/// sum over examples of label * chi_S(x) for the subset given by `vars`.
std::int64_t correlation_sum(const ExampleMatrix& examples, std::span<const int> vars);

/// correlation_sum for each subset in a flat list of `width`-sized subsets.
std::vector<std::int64_t> level_sums_serial(const ExampleMatrix& examples,
                                            std::span<const int> subsets, int width);
std::vector<std::int64_t> level_sums_parallel(const ExampleMatrix& examples,
                                              std::span<const int> subsets, int width);

// Sieve of Eratosthenes on [lo, hi] in fixed-size segments sharing one base
// prime list; the parallel version sieves segments concurrently.
std::vector<std::uint64_t> sieve_serial(std::uint64_t lo, std::uint64_t hi);
std::vector<std::uint64_t> sieve_parallel(std::uint64_t lo, std::uint64_t hi);

}  // namespace symjunta::kernels
