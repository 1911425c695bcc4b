#include "symjunta/structure.hpp"

#include <bit>
#include <ostream>

#include "symjunta/binomial.hpp"
#include "symjunta/error.hpp"
#include "symjunta/kernels.hpp"

namespace symjunta {
namespace {

mpz_class pow2(unsigned long e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, e);
  return out;
}

// C(x, j) for any integer x: x (x - 1) ... (x - j + 1) / j!.
mpz_class binomial_any(long x, int j) {
  if (x >= 0) return binomial(x, j);
  mpz_class num = 1, den = 1;
  for (int i = 0; i < j; ++i) {
    num *= x - i;
    den *= i + 1;
  }
  mpz_class out;
  mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

kernels::IndexRange shard_range(int k, Shard shard) {
  if (shard.count == 0 || shard.index >= shard.count) {
    throw Error(ErrorKind::out_of_range, "shard index " + std::to_string(shard.index) + " outside [0, " +
                                             std::to_string(shard.count) + ")");
  }
  using u128 = unsigned __int128;
  const u128 total = u128{1} << (k + 1);
  return {static_cast<std::uint64_t>(total * shard.index / shard.count),
          static_cast<std::uint64_t>(total * (shard.index + 1) / shard.count)};
}

void check_enumeration_arity(int k, int cap) {
  if (k < 1) throw Error(ErrorKind::out_of_range, "enumeration needs k >= 1");
  if (k > cap || k > kMaxLevelArity) {
    throw Error(ErrorKind::resource,
                "enumeration of k = " + std::to_string(k) + " exceeds the cap " + std::to_string(cap));
  }
}

}  // namespace

// ------------------------------------------------------------------ nullity

mpq_class NullityProfile::prob(int w) const {
  mpq_class q(numerators.at(static_cast<std::size_t>(w)), denominator);
  q.canonicalize();
  return q;
}

mpq_class conditional_prob(const SymmetricFunction& f, int t, int w) {
  const int k = f.arity();
  if (t < 0 || t > k || w < 0 || w > t) {
    throw Error(ErrorKind::out_of_range, "conditional_prob: need 0 <= w <= t <= k (t = " + std::to_string(t) +
                                             ", w = " + std::to_string(w) + ", k = " + std::to_string(k) + ")");
  }
  mpz_class num = 0;
  for (int i = 0; i <= k; ++i) {
    if (f.value(i)) num += binomial(k - t, i - w);
  }
  mpq_class q(num, pow2(static_cast<unsigned long>(k - t)));
  q.canonicalize();
  return q;
}

NullityProfile is_t_null(const SymmetricFunction& f, int t) {
  const int k = f.arity();
  if (t < 1 || t > k) {
    throw Error(ErrorKind::out_of_range, "is_t_null: t = " + std::to_string(t) + " outside [1, " +
                                             std::to_string(k) + "]");
  }
  NullityProfile profile;
  profile.k = k;
  profile.t = t;
  profile.denominator = pow2(static_cast<unsigned long>(k - t));
  profile.numerators.reserve(static_cast<std::size_t>(t) + 1);
  for (int w = 0; w <= t; ++w) {
    mpz_class num = 0;
    for (int i = w; i <= k; ++i) {
      if (f.value(i)) num += binomial(k - t, i - w);
    }
    profile.numerators.push_back(std::move(num));
  }
  profile.is_null = true;
  for (const auto& num : profile.numerators) {
    if (num != profile.numerators.front()) profile.is_null = false;
  }
  return profile;
}

bool is_t_null(const BooleanFunction& f, int t) {
  const int k = f.arity();
  if (t < 1 || t > k) {
    throw Error(ErrorKind::out_of_range, "is_t_null: t = " + std::to_string(t) + " outside [1, " +
                                             std::to_string(k) + "]");
  }
  const std::uint64_t cube = std::uint64_t{1} << k;
  std::vector<std::uint64_t> counts(std::size_t{1} << t);
  std::optional<std::uint64_t> reference;
  for (std::uint64_t S = 0; S < cube; ++S) {
    if (std::popcount(S) != t) continue;
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint64_t x = 0; x < cube; ++x) {
      if (!f(x)) continue;
      // sigma = x restricted to S, packed in increasing variable order.
      std::uint64_t sigma = 0;
      int pos = 0;
      for (std::uint64_t bits = S; bits; bits &= bits - 1, ++pos) {
        sigma |= ((x >> std::countr_zero(bits)) & 1) << pos;
      }
      ++counts[sigma];
    }
    for (auto c : counts) {
      if (!reference) reference = c;
      if (c != *reference) return false;
    }
  }
  return true;
}

int max_null_order(const SymmetricFunction& f) {
  int t = 0;
  while (t < f.arity() && is_t_null(f, t + 1).is_null) ++t;
  return t;
}

// ------------------------------------------------------------------ windows

WindowSystem window_system(const SymmetricFunction& f, int t0) {
  const int k = f.arity();
  if (t0 < 1 || t0 > k) {
    throw Error(ErrorKind::out_of_range, "window_system: t0 = " + std::to_string(t0) + " outside [1, " +
                                             std::to_string(k) + "]");
  }
  WindowSystem ws;
  ws.k = k;
  ws.N = k - t0;
  ws.epsilon = mpq_class(t0, k);
  ws.epsilon.canonicalize();
  for (int nu = 0; nu <= t0; ++nu) {
    mpz_class sum = 0;
    for (int j = 0; j <= ws.N; ++j) {
      if (f.value(nu + j)) sum += binomial(ws.N, j);
    }
    ws.sums.push_back(std::move(sum));
  }
  bool equal = true;
  for (const auto& s : ws.sums) equal = equal && s == ws.sums.front();
  if (equal) ws.common = ws.sums.front();
  return ws;
}

// ----------------------------------------------------- difference sequences

bool DifferenceSequence::alternates() const noexcept {
  int last = 0;
  for (int v : x) {
    if (v == 0) continue;
    if (v == last) return false;
    last = v;
  }
  return true;
}

DifferenceSequence difference_sequence(const SymmetricFunction& f) {
  DifferenceSequence d;
  d.x.reserve(static_cast<std::size_t>(f.arity()));
  for (int j = 0; j < f.arity(); ++j) d.x.push_back(int{f.value(j + 1)} - int{f.value(j)});
  return d;
}

mpz_class BinomialPolynomial::operator()(long x) const {
  mpz_class acc = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] != 0) acc += a[j] * binomial_any(x, static_cast<int>(j));
  }
  return acc;
}

bool BinomialPolynomial::is_constant() const {
  for (std::size_t j = 1; j < a.size(); ++j) {
    if (a[j] != 0) return false;
  }
  return true;
}

BinomialPolynomial fit_binomial_polynomial(std::span<const mpz_class> values, int N) {
  if (N < 0 || static_cast<std::size_t>(N) > values.size()) {
    throw Error(ErrorKind::out_of_range, "fit_binomial_polynomial: need 0 <= N <= number of samples (N = " +
                                             std::to_string(N) + ", samples = " +
                                             std::to_string(values.size()) + ")");
  }
  BinomialPolynomial P;
  P.degree_bound = N;
  std::vector<mpz_class> diff(values.begin(), values.begin() + N);
  for (int j = 0; j < N; ++j) {
    P.a.push_back(diff[0]);
    for (int i = 0; i + 1 < N - j; ++i) diff[i] = diff[i + 1] - diff[i];
  }
  for (std::size_t x = 0; x < values.size(); ++x) {
    if (P(static_cast<long>(x)) != values[x]) {
      throw Error(ErrorKind::fit, "fit_binomial_polynomial: sample " + std::to_string(x) +
                                      " is not on any polynomial of degree < " + std::to_string(N));
    }
  }
  return P;
}

BinomialPolynomial fit_binomial_polynomial(std::span<const long> values, int N) {
  std::vector<mpz_class> v(values.begin(), values.end());
  return fit_binomial_polynomial(v, N);
}

BinomialPolynomial difference_polynomial(const SymmetricFunction& f) {
  const auto X = difference_sequence(f);
  std::vector<long> values;
  values.reserve(X.x.size());
  for (std::size_t j = 0; j < X.x.size(); ++j) values.push_back((j & 1) ? -X.x[j] : X.x[j]);
  return fit_binomial_polynomial(values, f.arity() - max_null_order(f));
}

bool verify_recurrence(const SymmetricFunction& f, int N1) {
  if (N1 < 0) throw Error(ErrorKind::out_of_range, "verify_recurrence: N1 must be >= 0");
  const auto X = difference_sequence(f);
  const int k = f.arity();
  for (int nu = 0; nu <= k - N1 - 1; ++nu) {
    mpz_class acc = 0;
    for (int j = 0; j <= N1; ++j) {
      if (X.x[nu + j] != 0) acc += X.x[nu + j] * binomial(N1, j);
    }
    if (acc != 0) return false;
  }
  return true;
}

// -------------------------------------------------------------- enumeration

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["k"] = k;
  j["bound"] = bound;
  j["shard"] = {{"count", shard.count}, {"index", shard.index}};
  j["functions"] = functions;
  j["max_min_order"] = max_min_order;
  j["histogram"] = histogram;
  j["argmax_count"] = argmax_count;
  j["argmax_functions"] = argmax_functions;
  j["counterexample_count"] = counterexample_count;
  j["counterexamples"] = counterexamples;
  return j;
}

VerificationReport enumerate_and_verify(int k, const BoundFn& bound, Shard shard, int cap) {
  check_enumeration_arity(k, cap);
  const auto range = shard_range(k, shard);
  const LevelTable table(k);
  const int b = bound(k);
  const auto tally = kernels::tally_min_orders_parallel(table, b, range);

  VerificationReport report;
  report.k = k;
  report.bound = b;
  report.shard = shard;
  report.functions = tally.visited;
  report.max_min_order = tally.max_order;
  report.histogram = tally.histogram;
  report.argmax_count = tally.argmax_count;
  report.counterexample_count = tally.counterexample_count;
  for (auto idx : tally.argmax) report.argmax_functions.push_back(SymmetricFunction::from_index(k, idx).to_string());
  for (auto idx : tally.counterexamples) {
    report.counterexamples.push_back(SymmetricFunction::from_index(k, idx).to_string());
  }
  return report;
}

void write_min_order_csv(std::ostream& out, int k, Shard shard, int cap) {
  check_enumeration_arity(k, cap);
  const auto range = shard_range(k, shard);
  const LevelTable table(k);
  out << "function,min_order,exceptional\n";
  for (std::uint64_t idx = range.begin; idx < range.end; ++idx) {
    const auto f = SymmetricFunction::from_index(k, idx);
    const auto order = min_nonzero_order(f, table);
    out << f.to_string() << ',';
    if (order) {
      out << *order;
    } else {
      out << "none";
    }
    out << ',' << (f.is_exceptional() ? 1 : 0) << '\n';
  }
}

}  // namespace symjunta
