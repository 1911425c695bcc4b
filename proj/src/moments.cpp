#include "symjunta/moments.hpp"

#include <algorithm>
#include <bit>

#include "symjunta/binomial.hpp"
#include "symjunta/error.hpp"

namespace symjunta {
namespace {

mpz_class pow2(unsigned long e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, e);
  return out;
}

mpz_class ipow(long base, unsigned e) {
  mpz_class out;
  mpz_class b = base;
  mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), e);
  return out;
}

mpq_class ratio(const mpz_class& num, const mpz_class& den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

void require_source(const std::vector<mpz_class>& values) {
  bool any = false;
  for (const auto& v : values) {
    if (v < 0) throw Error(ErrorKind::invalid_argument, "induced measure: source must be nonnegative");
    any = any || v != 0;
  }
  if (!any) throw Error(ErrorKind::invalid_argument, "induced measure: source is identically zero");
}

void check_indices(std::span<const int> indices, int k) {
  std::vector<int> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::invalid_argument, "product_moment: indices must be distinct");
  }
  if (!sorted.empty() && (sorted.front() < 0 || sorted.back() >= k)) {
    throw Error(ErrorKind::out_of_range, "product_moment: index outside [0, k)");
  }
}

std::string str(const mpq_class& q) { return q.get_str(); }

}  // namespace

// ------------------------------------------------------- weight distribution

bool WeightDistribution::normalized() const {
  mpq_class total = 0;
  for (const auto& m : masses) total += m;
  return total == 1;
}

bool WeightDistribution::symmetric() const {
  const std::size_t n = masses.size();
  for (std::size_t j = 0; j < n / 2; ++j) {
    if (masses[j] != masses[n - 1 - j]) return false;
  }
  return true;
}

WeightDistribution binomial_distribution(int k) {
  WeightDistribution d;
  const mpz_class scale = pow2(static_cast<unsigned long>(k));
  for (int j = 0; j <= k; ++j) d.masses.push_back(ratio(binomial(k, j), scale));
  return d;
}

// -------------------------------------------------------------- CubeMeasure

CubeMeasure::CubeMeasure(Kind kind, int k, bool by_class, std::vector<mpz_class> values)
    : kind_(kind), k_(k), by_class_(by_class), values_(std::move(values)), total_(0) {
  if (by_class_) {
    for (int w = 0; w <= k_; ++w) total_ += values_[w] * binomial(k_, w);
  } else {
    for (const auto& v : values_) total_ += v;
  }
}

CubeMeasure CubeMeasure::uniform(int k) {
  if (k < 0) throw Error(ErrorKind::out_of_range, "CubeMeasure::uniform: k must be >= 0");
  return CubeMeasure(Kind::uniform, k, true, std::vector<mpz_class>(static_cast<std::size_t>(k) + 1, 1));
}

CubeMeasure CubeMeasure::induced(const BooleanFunction& f) {
  std::vector<mpz_class> values(f.table().begin(), f.table().end());
  return induced_points(f.arity(), std::move(values));
}

CubeMeasure CubeMeasure::induced_points(int k, std::vector<mpz_class> point_values) {
  if (k < 1 || k > kMaxPointMeasureArity) {
    throw Error(ErrorKind::resource, "CubeMeasure: point measures need 1 <= k <= " +
                                         std::to_string(kMaxPointMeasureArity));
  }
  if (point_values.size() != (std::size_t{1} << k)) {
    throw Error(ErrorKind::arity, "CubeMeasure: need 2^k point values");
  }
  require_source(point_values);
  return CubeMeasure(Kind::induced, k, false, std::move(point_values));
}

CubeMeasure CubeMeasure::induced_classes(std::vector<mpz_class> class_values) {
  if (class_values.empty()) throw Error(ErrorKind::arity, "CubeMeasure: need k + 1 class values");
  require_source(class_values);
  const int k = static_cast<int>(class_values.size()) - 1;
  return CubeMeasure(Kind::induced, k, true, std::move(class_values));
}

CubeMeasure CubeMeasure::induced(const SymmetricFunction& f) {
  return induced_classes(std::vector<mpz_class>(f.values().begin(), f.values().end()));
}

mpq_class CubeMeasure::mass(std::uint64_t point) const {
  if (by_class_) {
    if (k_ < 64 && (point >> k_) != 0) throw Error(ErrorKind::out_of_range, "CubeMeasure::mass: bad point");
    return ratio(values_[std::popcount(point)], total_);
  }
  return ratio(values_.at(point), total_);
}

WeightDistribution CubeMeasure::weight_distribution() const {
  std::vector<mpz_class> per_weight(static_cast<std::size_t>(k_) + 1, 0);
  if (by_class_) {
    for (int w = 0; w <= k_; ++w) per_weight[w] = values_[w] * binomial(k_, w);
  } else {
    for (std::uint64_t x = 0; x < values_.size(); ++x) per_weight[std::popcount(x)] += values_[x];
  }
  WeightDistribution d;
  for (const auto& v : per_weight) d.masses.push_back(ratio(v, total_));
  return d;
}

mpz_class CubeMeasure::containing_sum(std::span<const int> indices) const {
  check_indices(indices, k_);
  const auto s = static_cast<long>(indices.size());
  mpz_class acc = 0;
  if (by_class_) {
    // Points of weight w containing a fixed s-set: C(k - s, w - s).
    for (long w = s; w <= k_; ++w) acc += values_[w] * binomial(k_ - s, w - s);
    return acc;
  }
  std::uint64_t mask = 0;
  for (int i : indices) mask |= std::uint64_t{1} << i;
  for (std::uint64_t x = 0; x < values_.size(); ++x) {
    if ((x & mask) == mask) acc += values_[x];
  }
  return acc;
}

std::vector<mpz_class> CubeMeasure::containing_sums() const {
  if (by_class_) throw Error(ErrorKind::invalid_argument, "containing_sums: point measures only");
  std::vector<mpz_class> sums = values_;
  for (int i = 0; i < k_; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t m = 0; m < sums.size(); ++m) {
      if (!(m & bit)) sums[m] += sums[m | bit];
    }
  }
  return sums;
}

mpq_class product_moment(const CubeMeasure& measure, std::span<const int> indices) {
  return ratio(measure.containing_sum(indices), measure.total());
}

mpq_class power_moment(const WeightDistribution& dist, unsigned s) {
  mpq_class acc = 0;
  for (std::size_t j = 0; j < dist.masses.size(); ++j) {
    if (dist.masses[j] != 0) acc += dist.masses[j] * mpq_class(ipow(static_cast<long>(j), s));
  }
  return acc;
}

mpq_class binomial_moment(int k, unsigned s) {
  mpz_class acc = 0;
  for (int j = 0; j <= k; ++j) acc += binomial(k, j) * ipow(j, s);
  return ratio(acc, pow2(static_cast<unsigned long>(k)));
}

std::vector<std::int64_t> symmetrize(const SymmetricFunction& f) {
  const int k = f.arity();
  std::vector<std::int64_t> g(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) g[j] = f.value(j) + f.value(k - j);
  return g;
}

std::vector<std::uint8_t> symmetrize(const BooleanFunction& f) {
  const std::uint64_t all = (std::uint64_t{1} << f.arity()) - 1;
  std::vector<std::uint8_t> g(f.table().size());
  for (std::uint64_t x = 0; x < g.size(); ++x) g[x] = static_cast<std::uint8_t>(f(x) + f(x ^ all));
  return g;
}

// ----------------------------------------------------------- moment reports

nlohmann::ordered_json MomentMatchReport::to_json() const {
  nlohmann::ordered_json j;
  j["k"] = k;
  j["r"] = r;
  j["matched_up_to"] = matched_up_to;
  if (first_mismatch) {
    j["first_mismatch"] = {{"s", first_mismatch->s},
                           {"kind", first_mismatch->kind},
                           {"indices", first_mismatch->indices},
                           {"nu", str(first_mismatch->nu)},
                           {"mu", str(first_mismatch->mu)}};
  } else {
    j["first_mismatch"] = nullptr;
  }
  auto power = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < power_nu.size(); ++s) {
    power.push_back({{"s", s}, {"nu", str(power_nu[s])}, {"mu", str(power_mu[s])}});
  }
  j["power_moments"] = std::move(power);
  return j;
}

MomentMatchReport moment_match_report(const CubeMeasure& source, int r) {
  const int k = source.arity();
  MomentMatchReport rep;
  rep.k = k;
  rep.r = std::clamp(r, 0, k);
  const auto dist = source.weight_distribution();
  std::vector<mpz_class> sums;
  std::vector<std::uint64_t> order;
  if (!source.symmetric()) {
    sums = source.containing_sums();
    order = subsets_in_level_order(k);
  }

  auto note = [&](unsigned s, const char* kind, std::vector<int> indices, mpq_class nu, mpq_class mu) {
    if (!rep.first_mismatch) rep.first_mismatch = MomentMismatch{s, kind, std::move(indices), nu, mu};
  };

  bool all_matched = true;
  rep.matched_up_to = 0;
  for (int s = 0; s <= rep.r; ++s) {
    bool matched = true;
    const mpz_class scale = pow2(static_cast<unsigned long>(s));
    if (source.symmetric()) {
      std::vector<int> idx(static_cast<std::size_t>(s));
      for (int i = 0; i < s; ++i) idx[i] = i;
      const mpz_class hits = source.containing_sum(idx);
      // E_nu = hits / F against E_mu = 2^-s.
      if (hits * scale != source.total()) {
        matched = false;
        note(static_cast<unsigned>(s), "product", idx, ratio(hits, source.total()), ratio(1, scale));
      }
    } else {
      for (std::uint64_t mask : order) {
        if (std::popcount(mask) != s) continue;
        if (sums[mask] * scale == source.total()) continue;
        matched = false;
        std::vector<int> idx;
        for (int i = 0; i < k; ++i) {
          if ((mask >> i) & 1) idx.push_back(i);
        }
        note(static_cast<unsigned>(s), "product", std::move(idx), ratio(sums[mask], source.total()),
             ratio(1, scale));
        break;
      }
    }
    rep.power_nu.push_back(power_moment(dist, static_cast<unsigned>(s)));
    rep.power_mu.push_back(binomial_moment(k, static_cast<unsigned>(s)));
    if (rep.power_nu.back() != rep.power_mu.back()) {
      matched = false;
      note(static_cast<unsigned>(s), "power", {}, rep.power_nu.back(), rep.power_mu.back());
    }
    all_matched = all_matched && matched;
    if (all_matched) rep.matched_up_to = s;
  }
  return rep;
}

nlohmann::ordered_json VarianceGapReport::to_json() const {
  nlohmann::ordered_json j;
  j["k"] = k;
  j["epsilon"] = str(epsilon);
  j["var_tau"] = str(var_tau);
  j["var_mu"] = str(var_mu);
  j["claimed_var_mu"] = str(claimed_var_mu);
  j["claim_matches"] = claim_matches;
  j["symmetric"] = symmetric;
  j["middle_band_empty"] = middle_band_empty;
  j["lower_bound"] = str(lower_bound);
  j["lower_bound_applies"] = lower_bound_applies;
  j["lower_bound_holds"] = lower_bound_holds;
  j["exceeds_uniform"] = exceeds_uniform;
  return j;
}

VarianceGapReport variance_gap_check(const WeightDistribution& tau, int k, const mpq_class& epsilon) {
  if (tau.arity() != k) throw Error(ErrorKind::arity, "variance_gap_check: distribution arity differs from k");
  if (!tau.normalized()) throw Error(ErrorKind::invalid_argument, "variance_gap_check: masses must sum to 1");
  VarianceGapReport rep;
  rep.k = k;
  rep.epsilon = epsilon;
  const mpq_class m1 = power_moment(tau, 1);
  rep.var_tau = power_moment(tau, 2) - m1 * m1;
  const mpq_class u1 = binomial_moment(k, 1);
  rep.var_mu = binomial_moment(k, 2) - u1 * u1;
  rep.claimed_var_mu = k;
  rep.claim_matches = rep.var_mu == rep.claimed_var_mu;
  rep.symmetric = tau.symmetric();

  const mpq_class half_k = ratio(k, 2);
  const mpq_class lo = (1 - epsilon) * half_k;
  const mpq_class hi = (1 + epsilon) * half_k;
  rep.middle_band_empty = true;
  for (int j = 0; j <= k; ++j) {
    if (tau.masses[j] != 0 && mpq_class(j) > lo && mpq_class(j) < hi) rep.middle_band_empty = false;
  }
  const mpq_class half_width = epsilon * half_k;
  rep.lower_bound = half_width * half_width;
  rep.lower_bound_applies = rep.symmetric && rep.middle_band_empty;
  rep.lower_bound_holds = rep.var_tau >= rep.lower_bound;
  rep.exceeds_uniform = rep.var_tau > rep.var_mu;
  return rep;
}

}  // namespace symjunta
