#pragma once

// PAC learning of symmetric k-juntas from uniform labeled examples: the
// example oracle, Fourier coefficient estimation, the level-wise search for
// relevant variables, the special cases (constants and parities, via GF(2)
// elimination) and truth-table recovery.

#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "symjunta/boolfn.hpp"
#include "symjunta/rng.hpp"

namespace symjunta {

struct Example {
  Assignment x;
  bool label = false;
};

/// A symmetric core planted on `relevant` (sorted) inside n variables.
struct PlantedInstance {
  int n = 0;
  std::vector<int> relevant;
  SymmetricFunction core{std::vector<std::uint8_t>{0}};
  std::uint64_t seed = 0;

  bool label(const Assignment& x) const;
};

/// Relevant set drawn uniformly without replacement from the "plant" stream
/// of `seed`. ErrorKind::out_of_range when k > n, ErrorKind::arity when the core
/// arity differs from k.
PlantedInstance plant_instance(int n, int k, const SymmetricFunction& core, std::uint64_t seed);

class ExampleOracle {
 public:
  virtual ~ExampleOracle() = default;
  virtual int vars() const = 0;
  /// Up to m further examples; fewer only when a finite source runs dry.
  virtual std::vector<Example> draw(std::size_t m) = 0;
  /// Examples left in a finite source; nullopt for an unbounded one.
  virtual std::optional<std::size_t> available() const { return std::nullopt; }
};

/// Uniform examples labeled by a planted instance, from the "draw" stream.
class PlantedOracle final : public ExampleOracle {
 public:
  PlantedOracle(PlantedInstance instance, std::uint64_t seed);

  int vars() const override { return instance_.n; }
  std::vector<Example> draw(std::size_t m) override;
  const PlantedInstance& instance() const noexcept { return instance_; }

 private:
  PlantedInstance instance_;
  CounterRng stream_;
};

/// Replays a fixed example list once, in order.
class DatasetOracle final : public ExampleOracle {
 public:
  DatasetOracle(int n, std::vector<Example> examples);

  int vars() const override { return n_; }
  std::vector<Example> draw(std::size_t m) override;
  std::optional<std::size_t> available() const override { return remaining(); }
  std::size_t remaining() const noexcept { return examples_.size() - next_; }

 private:
  int n_;
  std::vector<Example> examples_;
  std::size_t next_ = 0;
};

/// m i.i.d. uniform examples of `inst`; deterministic in seed.
std::vector<Example> draw_examples(const PlantedInstance& inst, std::size_t m, std::uint64_t seed);

/// Every point of {0,1}^n exactly once, in index order.
std::vector<Example> exhaustive_examples(const PlantedInstance& inst);

/// (1/m) sum label * chi_S(x).
mpq_class estimate_coefficient(std::span<const Example> examples, std::span<const int> S);

struct EstimationPlan {
  int k = 0;
  int n = 0;
  int t_max = 0;
  double delta = 0;
  mpq_class tau;                 // 2^-(k+1)
  mpz_class tested_sets_bound;   // sum_{l <= t_max} C(n, l)
  std::uint64_t m = 0;           // ceil(2 tau^-2 ln(2 tested_sets_bound / delta))
};

EstimationPlan sample_size(int k, int n, int t_max, double delta);

struct ParityFit {
  std::vector<int> vars;
  bool complemented = false;
  bool unique = false;  // the examples have full rank n + 1
};

/// Example indices whose x (with the constant column) XOR to zero while their
/// labels XOR to one: no affine function agrees with all of them.
struct ParityInconsistency {
  std::vector<std::size_t> witness;
};

/// Solves label = <a, x> + b over GF(2) by incremental elimination. Free
/// variables are set to zero when the system is underdetermined.
std::variant<ParityFit, ParityInconsistency> learn_parity(std::span<const Example> examples);

enum class JuntaClass { constant_zero, constant_one, parity, parity_complement, general_symmetric };

const char* to_string(JuntaClass c) noexcept;

struct LearnResult {
  JuntaClass cls = JuntaClass::constant_zero;
  std::vector<int> relevant;
  SymmetricFunction core{std::vector<std::uint8_t>{0}};
  std::uint64_t examples_used = 0;

  nlohmann::ordered_json to_json() const;
};

struct TruthTableRecovery {
  SymmetricFunction core{std::vector<std::uint8_t>{0}};
  std::vector<std::uint64_t> hits;  // examples seen per weight class
  std::uint64_t drawn = 0;          // examples drawn beyond the pool
};

/// Hits needed per weight class: ceil(ln((k + 1) / delta) / ln 2).
std::uint64_t class_hit_target(int k, double delta);

/// Majority label per weight class of x restricted to `relevant`. Starts from
/// `pool` and draws further examples (at most `budget`) until every class
/// reaches class_hit_target. ErrorKind::budget if a class is never seen.
TruthTableRecovery recover_truth_table(ExampleOracle& oracle, std::span<const int> relevant,
                                       double delta, std::uint64_t budget,
                                       std::span<const Example> pool = {});

struct LearnOptions {
  /// Extra examples recover_truth_table may draw; 0 selects 2^(k+3) * target.
  std::uint64_t truth_table_budget = 0;
};

/// Constant test, then GF(2) parity fit, then the level-wise Fourier search on
/// one batch of sample_size(k, n, k, delta/2).m examples, then truth-table
/// recovery with delta/2. A finite oracle is consumed whole for the batch, so
/// a complete enumeration of the cube yields exact coefficients.
/// k is an upper bound on the junta size. ErrorKind::diagnostic when nothing
/// is detected up to level k.
LearnResult learn_symmetric_junta(ExampleOracle& oracle, int k, double delta,
                                  const LearnOptions& options = {});

/// Example file: one "<n-bit string> <0|1>" per line, '#' lines and blank lines
/// ignored. ErrorKind::parse names the offending line.
std::vector<Example> read_examples(std::istream& in);
void write_examples(std::ostream& out, std::span<const Example> examples);

struct OracleConfig {
  int n = 0;
  int k = 0;
  SymmetricFunction core{std::vector<std::uint8_t>{0}};
  std::uint64_t seed = 0;
  double delta = 0.05;

  static OracleConfig from_json(const nlohmann::json& j);
};

}  // namespace symjunta
