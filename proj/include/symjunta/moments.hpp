#pragma once

// Probability measures on the k-cube induced by nonnegative functions, their
// product and power moments, and the variance comparison between the
// symmetrized measure and the uniform one.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "symjunta/boolfn.hpp"

namespace symjunta {

/// Largest arity for measures stored point by point.
inline constexpr int kMaxPointMeasureArity = 20;

/// Distribution of S = X_1 + ... + X_k: masses[j] = Pr[S = j].
struct WeightDistribution {
  std::vector<mpq_class> masses;

  int arity() const noexcept { return static_cast<int>(masses.size()) - 1; }
  bool normalized() const;
  bool symmetric() const;
};

/// Binomial(k, 1/2), the weight distribution of the uniform measure.
WeightDistribution binomial_distribution(int k);

/// A measure with mass source(x) / F on point x, F = sum_x source(x). Sources
/// are nonnegative integers, either per point (general) or per weight class
/// (symmetric; every point of weight w carries class value w).
class CubeMeasure {
 public:
  enum class Kind { uniform, induced };

  static CubeMeasure uniform(int k);
  static CubeMeasure induced(const BooleanFunction& f);
  static CubeMeasure induced_points(int k, std::vector<mpz_class> point_values);
  static CubeMeasure induced_classes(std::vector<mpz_class> class_values);
  static CubeMeasure induced(const SymmetricFunction& f);

  Kind kind() const noexcept { return kind_; }
  int arity() const noexcept { return k_; }
  bool symmetric() const noexcept { return by_class_; }
  const mpz_class& total() const noexcept { return total_; }

  /// Mass of one cube point (point measures need k <= kMaxPointMeasureArity).
  mpq_class mass(std::uint64_t point) const;
  WeightDistribution weight_distribution() const;

  /// sum over points containing all of `indices` of the source value.
  mpz_class containing_sum(std::span<const int> indices) const;
  /// The same for every subset at once (point measures only), via a
  /// superset-sum transform; entry [mask].
  std::vector<mpz_class> containing_sums() const;

 private:
  CubeMeasure(Kind kind, int k, bool by_class, std::vector<mpz_class> values);

  Kind kind_;
  int k_;
  bool by_class_;
  std::vector<mpz_class> values_;
  mpz_class total_;
};

/// E[prod_{i in indices} X_i]; indices must be distinct and in [0, k).
mpq_class product_moment(const CubeMeasure& measure, std::span<const int> indices);

/// sum_j masses[j] j^s.
mpq_class power_moment(const WeightDistribution& dist, unsigned s);

/// 2^-k sum_j C(k, j) j^s.
mpq_class binomial_moment(int k, unsigned s);

/// g_j = f_j + f_{k-j}, the weight-class values of f(x) + f(complement x).
std::vector<std::int64_t> symmetrize(const SymmetricFunction& f);
std::vector<std::uint8_t> symmetrize(const BooleanFunction& f);

struct MomentMismatch {
  unsigned s = 0;
  std::string kind;          // "product" or "power"
  std::vector<int> indices;  // product mismatches only
  mpq_class nu;
  mpq_class mu;
};

struct MomentMatchReport {
  int k = 0;
  int r = 0;
  int matched_up_to = 0;
  std::optional<MomentMismatch> first_mismatch;
  std::vector<mpq_class> power_nu;  // orders 0..r
  std::vector<mpq_class> power_mu;

  nlohmann::ordered_json to_json() const;
};

/// Compares E_nu and E_mu of every product of at most r coordinates (one
/// representative per size for symmetric sources) and the power moments of S
/// up to order r. r is clamped to k.
MomentMatchReport moment_match_report(const CubeMeasure& source, int r);

struct VarianceGapReport {
  int k = 0;
  mpq_class epsilon;
  mpq_class var_tau;
  mpq_class var_mu;
  mpq_class claimed_var_mu;   // the value k sometimes quoted for Var_mu(S)
  bool claim_matches = false;
  bool symmetric = false;
  bool middle_band_empty = false;
  mpq_class lower_bound;      // (eps k / 2)^2
  bool lower_bound_applies = false;
  bool lower_bound_holds = false;
  bool exceeds_uniform = false;

  nlohmann::ordered_json to_json() const;
};

/// Var_tau(S) and Var_mu(S) exactly; when tau is symmetric about k/2 and has no
/// mass strictly inside ((1 - eps) k / 2, (1 + eps) k / 2), checks the bound
/// Var_tau >= (eps k / 2)^2.
VarianceGapReport variance_gap_check(const WeightDistribution& tau, int k,
                                     const mpq_class& epsilon);

}  // namespace symjunta
