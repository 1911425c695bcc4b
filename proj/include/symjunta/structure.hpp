#pragma once

// t-nullity, the window equation system, the difference sequence
// X_j = f_{j+1} - f_j with its integer-valued polynomial, and exhaustive
// min-order verification.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "symjunta/boolfn.hpp"

namespace symjunta {

/// Largest k accepted by enumerate_and_verify unless the caller raises it.
inline constexpr int kDefaultEnumerationCap = 22;

/// p_{t,w}(f) for w = 0..t, kept as numerators over 2^(k - t).
struct NullityProfile {
  int k = 0;
  int t = 0;
  std::vector<mpz_class> numerators;
  mpz_class denominator;
  bool is_null = false;

  mpq_class prob(int w) const;
};

/// Pr[f(x) = 1 | x_S = sigma] for |S| = t and weight(sigma) = w.
mpq_class conditional_prob(const SymmetricFunction& f, int t, int w);

/// Profile of p_{t,0..t}; requires 1 <= t <= k.
NullityProfile is_t_null(const SymmetricFunction& f, int t);

/// General definition: all p_{S,sigma} with |S| = t coincide. Enumerates every
/// S, sigma and completion, so it is meant for small k.
bool is_t_null(const BooleanFunction& f, int t);

/// Largest t in [0, k] such that f is t-null (k for constants, 0 if not 1-null).
int max_null_order(const SymmetricFunction& f);

struct WindowSystem {
  int k = 0;
  int N = 0;
  std::vector<mpz_class> sums;         // sums[nu] = sum_j C(N, j) f_{nu+j}
  std::optional<mpz_class> common;     // c_N when every sum agrees
  mpq_class epsilon;                   // (k - N) / k

  bool consistent() const noexcept { return common.has_value(); }
};

/// Window sums for t0 in [1, k], N = k - t0.
WindowSystem window_system(const SymmetricFunction& f, int t0);

struct DifferenceSequence {
  std::vector<int> x;  // X_j = f_{j+1} - f_j, j = 0..k-1

  /// After deleting zeros the entries alternate in sign.
  bool alternates() const noexcept;
};

DifferenceSequence difference_sequence(const SymmetricFunction& f);

/// P(x) = sum_j a_j C(x, j) with integer a_j and degree < degree_bound.
struct BinomialPolynomial {
  int degree_bound = 0;
  std::vector<mpz_class> a;

  mpz_class operator()(long x) const;
  bool is_constant() const;
};

/// Newton forward differences of values[0..N-1]; every later sample must agree
/// with the extrapolation, otherwise ErrorKind::fit. N = 0 fits only all-zero data.
BinomialPolynomial fit_binomial_polynomial(std::span<const mpz_class> values, int N);
BinomialPolynomial fit_binomial_polynomial(std::span<const long> values, int N);

/// The polynomial with X_j = (-1)^j P(j), fitted with N = k - max_null_order(f).
BinomialPolynomial difference_polynomial(const SymmetricFunction& f);

/// sum_j C(N1, j) X_{nu+j} = 0 for every nu in [0, k - N1 - 1].
bool verify_recurrence(const SymmetricFunction& f, int N1);

/// Enumeration shard: the index space [0, 2^(k+1)) is cut into `count`
/// contiguous blocks and block `index` is processed.
struct Shard {
  std::uint64_t count = 1;
  std::uint64_t index = 0;
};

/// k -> largest admissible min order.
using BoundFn = std::function<int(int)>;

struct VerificationReport {
  int k = 0;
  int bound = 0;
  Shard shard;
  std::uint64_t functions = 0;
  int max_min_order = 0;
  std::vector<std::uint64_t> histogram;  // [0] counts constants, [l] min order l
  std::uint64_t argmax_count = 0;
  std::vector<std::string> argmax_functions;  // first kernels::kMaxListed, by index
  std::uint64_t counterexample_count = 0;
  std::vector<std::string> counterexamples;

  nlohmann::ordered_json to_json() const;
};

/// Visits every symmetric function of arity k in the shard, skipping the four
/// exceptional ones for the extremes. Throws ErrorKind::resource when k > cap.
VerificationReport enumerate_and_verify(int k, const BoundFn& bound, Shard shard = {},
                                        int cap = kDefaultEnumerationCap);

/// "function,min_order,exceptional" rows for the shard ("none" for constants).
void write_min_order_csv(std::ostream& out, int k, Shard shard = {},
                         int cap = kDefaultEnumerationCap);

}  // namespace symjunta
