#pragma once

#include <cstdint>
#include <string_view>

namespace symjunta {

/// Counter-based generator: the i-th output is a fixed mix of (key, i), so a
/// stream is reproducible from its key alone and streams never share state.
/// Keys are derived from a 64-bit seed plus a stream name ("plant", "draw", ...).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::string_view stream);

  std::uint64_t next();

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Independent child stream; does not advance this stream.
  CounterRng split(std::string_view stream) const;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  CounterRng(std::uint64_t key, std::uint64_t counter, int)
      : key_(key), counter_(counter) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace symjunta
