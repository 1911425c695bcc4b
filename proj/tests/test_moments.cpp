#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "symjunta/moments.hpp"
#include "symjunta/structure.hpp"
#include "test_util.hpp"

using namespace symjunta;

namespace {

std::vector<mpz_class> as_weights(const std::vector<std::uint8_t>& table) {
  return {table.begin(), table.end()};
}

// Largest t with f t-null in the general sense, by brute force.
int max_null_brute(int k, const std::vector<std::uint8_t>& table) {
  int t = 0;
  while (t < k && oracle::t_null_brute(k, table, t + 1)) ++t;
  return t;
}

}  // namespace

TEST(Moments, BinomialMomentsClosedForms) {
  for (int k = 0; k <= 30; ++k) {
    EXPECT_EQ(binomial_moment(k, 0), 1);
    EXPECT_EQ(binomial_moment(k, 1), Q(k, 2));
    mpq_class second(k * (k + 1), 4);
    second.canonicalize();
    EXPECT_EQ(binomial_moment(k, 2), second);
    EXPECT_EQ(power_moment(binomial_distribution(k), 3), binomial_moment(k, 3));
  }
}

TEST(Moments, ProductAndPowerMomentsMatchBruteForce) {
  std::mt19937_64 gen(17);
  for (int k = 1; k <= 8; ++k) {
    std::vector<std::uint8_t> table(std::size_t{1} << k);
    for (auto& b : table) b = gen() & 1;
    table[0] = 1;
    const auto measure = CubeMeasure::induced(BooleanFunction(k, table));
    const auto sums = measure.containing_sums();
    for (std::uint64_t S = 0; S < table.size(); ++S) {
      std::vector<int> idx;
      for (int i = 0; i < k; ++i) {
        if ((S >> i) & 1) idx.push_back(i);
      }
      const auto brute = oracle::product_moment_brute(k, as_weights(table), S);
      ASSERT_EQ(product_moment(measure, idx), brute);
      mpq_class via_sums(sums[S], measure.total());
      via_sums.canonicalize();
      ASSERT_EQ(via_sums, brute);
    }
    const auto dist = measure.weight_distribution();
    EXPECT_TRUE(dist.normalized());
    for (unsigned s = 0; s <= 4; ++s) {
      ASSERT_EQ(power_moment(dist, s), oracle::power_moment_brute(k, as_weights(table), s));
    }
  }
}

TEST(Moments, SymmetricMeasureAgreesWithPointMeasure) {
  const auto f = SymmetricFunction::parse("0110100");
  const auto by_class = CubeMeasure::induced(f);
  const auto by_point = CubeMeasure::induced(f.expand());
  EXPECT_EQ(by_class.total(), by_point.total());
  for (std::uint64_t x = 0; x < 64; ++x) EXPECT_EQ(by_class.mass(x), by_point.mass(x));
  const std::vector<int> idx{1, 4};
  EXPECT_EQ(product_moment(by_class, idx), product_moment(by_point, idx));
}

TEST(Moments, MatchUpToNullOrderSymmetric) {
  for (int k = 1; k <= 8; ++k) {
    for (std::uint64_t idx = 1; idx < (std::uint64_t{2} << k); ++idx) {
      const auto f = SymmetricFunction::from_index(k, idx);
      const int t = max_null_order(f);
      const auto rep = moment_match_report(CubeMeasure::induced(f), k);
      ASSERT_EQ(rep.matched_up_to, t) << f.to_string();
      if (t < k) {
        ASSERT_TRUE(rep.first_mismatch.has_value());
        EXPECT_EQ(rep.first_mismatch->s, static_cast<unsigned>(t + 1));
      } else {
        EXPECT_FALSE(rep.first_mismatch.has_value());
      }
    }
  }
}

TEST(Moments, MatchUpToNullOrderGeneral) {
  // Every nonzero boolean function on 3 variables.
  for (std::uint64_t bits = 1; bits < 256; ++bits) {
    std::vector<std::uint8_t> table(8);
    for (int x = 0; x < 8; ++x) table[x] = (bits >> x) & 1;
    const auto rep = moment_match_report(CubeMeasure::induced(BooleanFunction(3, table)), 3);
    ASSERT_EQ(rep.matched_up_to, max_null_brute(3, table)) << bits;
  }
}

TEST(Moments, ParityOnThreeBits) {
  const auto rep = moment_match_report(CubeMeasure::induced(SymmetricFunction::parse("0101")), 2);
  EXPECT_EQ(rep.matched_up_to, 2);
  EXPECT_FALSE(rep.first_mismatch.has_value());
  const auto j = rep.to_json();
  EXPECT_EQ(j["matched_up_to"], 2);
  EXPECT_TRUE(j["first_mismatch"].is_null());
}

TEST(Moments, Symmetrize) {
  EXPECT_EQ(symmetrize(SymmetricFunction::parse("1000")), (std::vector<std::int64_t>{1, 0, 0, 1}));
  EXPECT_EQ(symmetrize(SymmetricFunction::parse("0011")), (std::vector<std::int64_t>{1, 1, 1, 1}));
  const auto g = symmetrize(BooleanFunction(2, {1, 0, 0, 0}));
  EXPECT_EQ(g, (std::vector<std::uint8_t>{1, 0, 0, 1}));
}

TEST(Moments, RejectsEmptySource) {
  EXPECT_ERROR_KIND(CubeMeasure::induced(SymmetricFunction::zero(3)), ErrorKind::invalid_argument);
  const auto m = CubeMeasure::uniform(3);
  const std::vector<int> dup{1, 1};
  EXPECT_ERROR_KIND(product_moment(m, dup), ErrorKind::invalid_argument);
}

TEST(Variance, TwoPointExample) {
  WeightDistribution tau;
  tau.masses.assign(101, 0);
  tau.masses[40] = Q(1, 2);
  tau.masses[60] = Q(1, 2);
  const auto rep = variance_gap_check(tau, 100, Q(1, 5));
  EXPECT_EQ(rep.var_tau, 100);
  EXPECT_EQ(rep.var_mu, 25);
  EXPECT_EQ(rep.claimed_var_mu, 100);
  EXPECT_FALSE(rep.claim_matches);
  EXPECT_TRUE(rep.lower_bound_applies);
  EXPECT_EQ(rep.lower_bound, 100);
  EXPECT_TRUE(rep.lower_bound_holds);
  EXPECT_TRUE(rep.exceeds_uniform);
}

TEST(Variance, UniformIsQuarterK) {
  for (int k = 1; k <= 30; ++k) {
    const auto rep = variance_gap_check(binomial_distribution(k), k, Q(1, 5));
    EXPECT_EQ(rep.var_mu, Q(k, 4));
    EXPECT_EQ(rep.var_tau, rep.var_mu);
  }
}

TEST(Variance, ExtremesFromSymmetrizedDelta) {
  // f = 10..0 symmetrizes to mass at 0 and k only.
  const int k = 12;
  std::vector<std::uint8_t> v(k + 1, 0);
  v[0] = 1;
  const auto g = symmetrize(SymmetricFunction(v));
  std::vector<mpz_class> cls(g.begin(), g.end());
  const auto tau = CubeMeasure::induced_classes(cls).weight_distribution();
  EXPECT_EQ(tau.masses[0], Q(1, 2));
  EXPECT_EQ(tau.masses[k], Q(1, 2));
  const auto rep = variance_gap_check(tau, k, Q(1, 2));
  EXPECT_EQ(rep.var_tau, 36);
  EXPECT_TRUE(rep.lower_bound_applies);
  EXPECT_TRUE(rep.lower_bound_holds);
}
