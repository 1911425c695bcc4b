#pragma once

#include <cstdint>

#include <gmpxx.h>

namespace symjunta {

/// Rows of Pascal's triangle kept in the shared exact cache.
inline constexpr int kBinomialCacheRows = 256;

/// Largest n for which every C(n, r) fits in an int64_t.
inline constexpr int kBinomial64MaxN = 62;

/// Exact C(n, r) with the convention C(n, r) = 0 when r < 0 or r > n.
/// Rows up to kBinomialCacheRows come from a triangle that is built once and
/// then shared read-only; larger rows are computed on demand.
mpz_class binomial(long n, long r);

/// C(n, r) for 0 <= n <= kBinomial64MaxN, same convention; throws above that.
std::int64_t binomial64(int n, int r);

}  // namespace symjunta
