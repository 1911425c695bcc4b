#include "symjunta/numtheory.hpp"

#include <algorithm>
#include <numeric>

#include "symjunta/binomial.hpp"
#include "symjunta/error.hpp"
#include "symjunta/kernels.hpp"

namespace symjunta {
namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return result;
}

void require_prime(std::uint64_t p, const char* what) {
  if (!is_prime(p)) {
    throw Error(ErrorKind::invalid_argument, std::string(what) + ": " + std::to_string(p) + " is not prime");
  }
}

std::uint64_t reduce(const mpz_class& v, std::uint64_t p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p);
  return r.get_ui();
}

// C(n, r) mod p for n < p.
std::uint64_t small_binomial_mod(std::uint64_t n, std::uint64_t r, std::uint64_t p) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t num = 1, den = 1;
  for (std::uint64_t i = 0; i < r; ++i) {
    num = mul_mod(num, (n - i) % p, p);
    den = mul_mod(den, (i + 1) % p, p);
  }
  return mul_mod(num, pow_mod(den, p - 2, p), p);
}

nlohmann::ordered_json to_json_string(const mpz_class& v) { return v.get_str(); }

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for n < 3.3e24.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s && composite; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) return 0;
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

std::vector<std::uint64_t> primes_in_interval(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 2 || lo > hi) {
    throw Error(ErrorKind::out_of_range, "primes_in_interval: need 2 <= lo <= hi (lo = " + std::to_string(lo) +
                                             ", hi = " + std::to_string(hi) + ")");
  }
  if (hi > kSieveCap) {
    throw Error(ErrorKind::resource, "primes_in_interval: hi = " + std::to_string(hi) + " exceeds the sieve cap " +
                                         std::to_string(kSieveCap));
  }
  return kernels::sieve_parallel(lo, hi);
}

nlohmann::ordered_json APQuery::to_json() const {
  nlohmann::ordered_json j;
  j["lo"] = lo;
  j["hi"] = hi;
  j["M"] = M;
  j["a"] = a;
  j["phi"] = phi;
  j["count"] = count();
  j["primes"] = primes;
  return j;
}

APQuery primes_in_ap(std::uint64_t lo, std::uint64_t hi, std::uint64_t M, std::uint64_t a) {
  if (M == 0) throw Error(ErrorKind::invalid_argument, "primes_in_ap: modulus must be >= 1");
  if (std::gcd(M, a) != 1) {
    throw Error(ErrorKind::invalid_argument, "primes_in_ap: gcd(" + std::to_string(M) + ", " + std::to_string(a) +
                                                 ") != 1");
  }
  APQuery q;
  q.lo = lo;
  q.hi = hi;
  q.M = M;
  q.a = a % M;
  q.phi = euler_phi(M);
  const std::uint64_t from = std::max<std::uint64_t>(lo, 2);
  if (from > hi) return q;
  for (auto p : primes_in_interval(from, hi)) {
    if (p % M == q.a) q.primes.push_back(p);
  }
  return q;
}

std::uint64_t binomial_mod(std::uint64_t n, std::uint64_t r, std::uint64_t p) {
  require_prime(p, "binomial_mod");
  if (r > n) return 0;
  std::uint64_t result = 1 % p;
  while (n || r) {
    const std::uint64_t ni = n % p, ri = r % p;
    if (ri > ni) return 0;
    result = mul_mod(result, small_binomial_mod(ni, ri, p), p);
    n /= p;
    r /= p;
  }
  return result;
}

nlohmann::ordered_json LucasCheck::to_json() const {
  nlohmann::ordered_json j;
  j["m"] = m;
  j["l"] = l;
  j["r"] = r;
  j["vanishing_holds"] = vanishing_holds;
  j["lifted"] = lifted;
  j["base"] = base;
  j["lifting_holds"] = lifting_holds;
  j["pass"] = passed();
  return j;
}

LucasCheck lucas_check(std::uint64_t m, std::uint64_t l, std::uint64_t r) {
  require_prime(r, "lucas_check");
  if (l > m) throw Error(ErrorKind::out_of_range, "lucas_check: need l <= m");
  LucasCheck c;
  c.m = m;
  c.l = l;
  c.r = r;
  const auto top = static_cast<long>(m * r);
  for (long n = 0; n <= top; ++n) {
    if (n % static_cast<long>(r) == 0) continue;
    if (reduce(binomial(top, n), r) != 0) {
      c.vanishing_holds = false;
      break;
    }
  }
  c.lifted = reduce(binomial(top, static_cast<long>(l * r)), r);
  c.base = reduce(binomial(static_cast<long>(m), static_cast<long>(l)), r);
  c.lifting_holds = c.lifted == c.base;
  return c;
}

ModPeriodicityReport mod_periodicity_check(const BinomialPolynomial& P, std::uint64_t p, long j_lo, long j_hi) {
  require_prime(p, "mod_periodicity_check");
  if (p < static_cast<std::uint64_t>(std::max(P.degree_bound, 0))) {
    throw Error(ErrorKind::out_of_range, "mod_periodicity_check: prime " + std::to_string(p) +
                                             " is below the degree bound " + std::to_string(P.degree_bound));
  }
  ModPeriodicityReport rep;
  rep.p = p;
  rep.j_lo = j_lo;
  rep.j_hi = j_hi;
  for (long j = j_lo; j <= j_hi; ++j) {
    const mpz_class u = P(j);
    const mpz_class v = P(j + static_cast<long>(p));
    if (reduce(v - u, p) != 0) rep.periodic_mod = false;
    if (abs(u) <= 1 && abs(v) <= 1) {
      ++rep.bounded_pairs;
      if (u != v) {
        rep.bounded_pairs_equal = false;
        rep.unequal_bounded.push_back(j);
      }
    }
  }
  return rep;
}

nlohmann::ordered_json PeriodicityCertificate::to_json() const {
  nlohmann::ordered_json j;
  j["N"] = N;
  j["k"] = k;
  j["h"] = h;
  j["q"] = q;
  j["r"] = r;
  j["M"] = M;
  j["t"] = t;
  j["s"] = s;
  j["ell"] = ell();
  j["degenerate"] = degenerate;
  return j;
}

PeriodicityCertificate two_periodicity_certificate(long N, long k) {
  if (N < 1 || k < N) throw Error(ErrorKind::out_of_range, "two_periodicity_certificate: need 1 <= N <= k");
  PeriodicityCertificate c;
  c.N = N;
  c.k = k;
  c.h = (k - N) / 3;
  const auto lo = static_cast<std::uint64_t>(std::max<long>(N, 2));
  const auto hi = static_cast<std::uint64_t>(N + c.h);
  const std::string interval = "[" + std::to_string(N) + ", " + std::to_string(N + c.h) + "]";
  std::vector<std::uint64_t> primes;
  if (lo <= hi) primes = primes_in_interval(lo, hi);
  if (primes.size() < 2) {
    throw Error(ErrorKind::unavailable, "certificate unavailable: fewer than two primes in " + interval);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i + 1 < primes.size(); ++i) {
    if (primes[i + 1] - primes[i] < primes[best + 1] - primes[best]) best = i;
  }
  c.q = primes[best];
  c.r = primes[best + 1];
  c.M = c.r - c.q;
  if (c.M <= 2) {
    c.degenerate = true;
    c.t = c.q;
    c.s = c.r;
    return c;
  }
  auto t_it = std::find_if(primes.begin(), primes.end(), [&](auto p) { return p % c.M == c.M - 1; });
  if (t_it == primes.end()) {
    throw Error(ErrorKind::unavailable, "certificate unavailable: no prime = -1 mod " + std::to_string(c.M) +
                                            " in " + interval);
  }
  auto s_it = std::find_if(t_it + 1, primes.end(), [&](auto p) { return p % c.M == 1; });
  if (s_it == primes.end()) {
    throw Error(ErrorKind::unavailable, "certificate unavailable: no prime = 1 mod " + std::to_string(c.M) +
                                            " after " + std::to_string(*t_it) + " in " + interval);
  }
  c.t = *t_it;
  c.s = *s_it;
  return c;
}

bool check_certificate(const PeriodicityCertificate& c) {
  if (c.N < 1 || c.k < c.N || c.h != (c.k - c.N) / 3) return false;
  const auto lo = static_cast<std::uint64_t>(c.N);
  const auto hi = static_cast<std::uint64_t>(c.N + c.h);
  for (auto p : {c.q, c.r, c.t, c.s}) {
    if (p < lo || p > hi || !is_prime(p)) return false;
  }
  if (!(c.q < c.r) || c.r - c.q != c.M || !(c.t < c.s)) return false;
  const auto primes = primes_in_interval(std::max<std::uint64_t>(lo, 2), hi);
  for (std::size_t i = 0; i + 1 < primes.size(); ++i) {
    if (primes[i + 1] - primes[i] < c.M) return false;
  }
  if ((c.s - c.t) % c.M != 2 % c.M) return false;
  if (!c.degenerate && (c.t % c.M != c.M - 1 || c.s % c.M != 1)) return false;
  return c.degenerate == (c.M <= 2);
}

bool two_periodic_on_window_union(const BinomialPolynomial& P, long N, long k) {
  auto in_union = [&](long j) { return (j >= 0 && j <= k - N) || (j >= N && j <= k - 1); };
  for (long j = 0; j + 2 <= k - 1; ++j) {
    if (in_union(j) && in_union(j + 2) && P(j) != P(j + 2)) return false;
  }
  return true;
}

bool LucasRelationReport::all_congruent() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& row) { return row.residue == 0; });
}

bool LucasRelationReport::forced_rows_exact() const {
  for (const auto& row : rows) {
    if (power_bound && row.values_bounded && row.residue == 0 && row.exact != 0) return false;
  }
  return true;
}

nlohmann::ordered_json LucasRelationReport::to_json() const {
  nlohmann::ordered_json j;
  j["m"] = m;
  j["r"] = r;
  j["power_bound"] = power_bound;
  j["all_congruent"] = all_congruent();
  j["forced_rows_exact"] = forced_rows_exact();
  auto out = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    out.push_back({{"nu", row.nu},
                   {"exact", to_json_string(row.exact)},
                   {"residue", row.residue},
                   {"values_bounded", row.values_bounded}});
  }
  j["rows"] = std::move(out);
  return j;
}

LucasRelationReport lucas_relation_check(const BinomialPolynomial& P, std::uint64_t m, std::uint64_t r, long nu_lo,
                                         long nu_hi) {
  require_prime(r, "lucas_relation_check");
  LucasRelationReport rep;
  rep.m = m;
  rep.r = r;
  rep.power_bound = m < 63 && (std::uint64_t{1} << m) < r;
  for (long nu = nu_lo; nu <= nu_hi; ++nu) {
    LucasRelationRow row;
    row.nu = nu;
    row.values_bounded = true;
    for (std::uint64_t l = 0; l <= m; ++l) {
      const mpz_class value = P(nu + static_cast<long>(l * r));
      if (abs(value) > 1) row.values_bounded = false;
      const mpz_class term = binomial(static_cast<long>(m), static_cast<long>(l)) * value;
      if (l & 1) {
        row.exact -= term;
      } else {
        row.exact += term;
      }
    }
    row.residue = reduce(row.exact, r);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace symjunta
