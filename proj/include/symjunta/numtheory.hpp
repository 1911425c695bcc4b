#pragma once

// Primes on intervals and in arithmetic progressions, Lucas-theorem
// arithmetic, and the mod-p periodicity checks applied to the polynomial P.

#include <cstdint>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "symjunta/structure.hpp"

namespace symjunta {

inline constexpr std::uint64_t kSieveCap = 100'000'000;

/// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime(std::uint64_t n);

std::uint64_t euler_phi(std::uint64_t n);

/// Sorted primes in [lo, hi]; requires 2 <= lo <= hi <= kSieveCap.
std::vector<std::uint64_t> primes_in_interval(std::uint64_t lo, std::uint64_t hi);

struct APQuery {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t M = 1;
  std::uint64_t a = 0;
  std::uint64_t phi = 1;
  std::vector<std::uint64_t> primes;

  std::uint64_t count() const noexcept { return primes.size(); }
  nlohmann::ordered_json to_json() const;
};

/// Primes p in [lo, hi] with p = a (mod M); ErrorKind::invalid_argument unless
/// gcd(M, a) = 1.
APQuery primes_in_ap(std::uint64_t lo, std::uint64_t hi, std::uint64_t M, std::uint64_t a);

/// C(n, r) mod p for prime p, digit by digit in base p.
std::uint64_t binomial_mod(std::uint64_t n, std::uint64_t r, std::uint64_t p);

struct LucasCheck {
  std::uint64_t m = 0;
  std::uint64_t l = 0;
  std::uint64_t r = 0;
  bool vanishing_holds = true;   // C(m r, n) = 0 mod r whenever r does not divide n
  std::uint64_t lifted = 0;      // C(m r, l r) mod r
  std::uint64_t base = 0;        // C(m, l) mod r
  bool lifting_holds = false;

  bool passed() const noexcept { return vanishing_holds && lifting_holds; }
  nlohmann::ordered_json to_json() const;
};

/// Checks both congruences from exact binomials; r must be prime.
LucasCheck lucas_check(std::uint64_t m, std::uint64_t l, std::uint64_t r);

struct ModPeriodicityReport {
  std::uint64_t p = 0;
  long j_lo = 0;
  long j_hi = 0;
  bool periodic_mod = true;
  std::uint64_t bounded_pairs = 0;   // pairs with P(j), P(j+p) in {-1, 0, 1}
  bool bounded_pairs_equal = true;   // exact equality across those pairs
  std::vector<long> unequal_bounded; // j where a bounded pair differs
};

/// P(j + p) = P(j) (mod p) for j in [j_lo, j_hi]; p must be a prime >= the
/// degree bound of P.
ModPeriodicityReport mod_periodicity_check(const BinomialPolynomial& P, std::uint64_t p,
                                           long j_lo, long j_hi);

struct PeriodicityCertificate {
  long N = 0;
  long k = 0;
  long h = 0;
  std::uint64_t q = 0;
  std::uint64_t r = 0;
  std::uint64_t M = 0;
  std::uint64_t t = 0;
  std::uint64_t s = 0;
  bool degenerate = false;  // M <= 2: the gap pair itself is the step s - t

  /// s - t = ell M + 2.
  std::uint64_t ell() const noexcept { return (s - t - 2) / (M == 0 ? 1 : M); }
  nlohmann::ordered_json to_json() const;
};

/// Minimal-gap primes q < r in [N, N + floor((k - N)/3)] and primes t = -1,
/// s = 1 (mod M) with t < s in the same interval. ErrorKind::unavailable
/// (message names the interval) when the interval is too thin.
PeriodicityCertificate two_periodicity_certificate(long N, long k);

/// Re-derives primality, minimality of the gap and the residue conditions.
bool check_certificate(const PeriodicityCertificate& cert);

/// P(j) = P(j + 2) whenever j, j + 2 lie in [0, k - N] or in [N, k - 1].
bool two_periodic_on_window_union(const BinomialPolynomial& P, long N, long k);

struct LucasRelationRow {
  long nu = 0;
  mpz_class exact;       // sum_l (-1)^l C(m, l) P(nu + l r)
  std::uint64_t residue = 0;
  bool values_bounded = false;  // every P(nu + l r) in {-1, 0, 1}
};

struct LucasRelationReport {
  std::uint64_t m = 0;
  std::uint64_t r = 0;
  bool power_bound = false;  // 2^m < r
  std::vector<LucasRelationRow> rows;

  bool all_congruent() const;
  /// Rows where the power bound and bounded values force the exact identity.
  bool forced_rows_exact() const;
  nlohmann::ordered_json to_json() const;
};

LucasRelationReport lucas_relation_check(const BinomialPolynomial& P, std::uint64_t m,
                                         std::uint64_t r, long nu_lo, long nu_hi);

}  // namespace symjunta
