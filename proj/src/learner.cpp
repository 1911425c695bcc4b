#include "symjunta/learner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "symjunta/binomial.hpp"
#include "symjunta/error.hpp"
#include "symjunta/kernels.hpp"

namespace symjunta {
namespace {

// Level search refuses levels with more subsets than this.
constexpr std::uint64_t kMaxSubsetsPerLevel = 50'000'000;

void check_delta(double delta, const char* what) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::invalid_argument, std::string(what) + ": delta must lie in (0, 1)");
  }
}

std::uint8_t label_of(std::span<const std::uint8_t> core, std::span<const int> relevant, const Assignment& x) {
  int w = 0;
  for (int i : relevant) w += x[i];
  return core[w];
}

Assignment random_assignment(CounterRng& rng, int n) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
  std::uint64_t word = 0;
  for (int i = 0; i < n; ++i) {
    if (i % 64 == 0) word = rng.next();
    bits[i] = (word >> (i % 64)) & 1;
  }
  return Assignment(std::move(bits));
}

// All `width`-subsets of [0, n) in lexicographic order, flattened.
std::vector<int> subsets_of_size(int n, int width) {
  std::vector<int> flat;
  std::vector<int> cur(static_cast<std::size_t>(width));
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    flat.insert(flat.end(), cur.begin(), cur.end());
    int i = width - 1;
    while (i >= 0 && cur[i] == n - width + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < width; ++j) cur[j] = cur[j - 1] + 1;
  }
  return flat;
}

kernels::ExampleMatrix to_matrix(std::span<const Example> examples, int n) {
  kernels::ExampleMatrix mat(n, examples.size());
  for (std::size_t e = 0; e < examples.size(); ++e) {
    for (int i = 0; i < n; ++i) {
      if (examples[e].x[i]) mat.set(e, i, true);
    }
    mat.set_label(e, examples[e].label);
  }
  return mat;
}

SymmetricFunction alternating(int k, bool complemented) {
  return complemented ? SymmetricFunction::parity_complement(k) : SymmetricFunction::parity(k);
}

// GF(2) bit rows with a trailing right-hand side bit.
struct Gf2Row {
  std::vector<std::uint64_t> coeffs;
  std::vector<std::uint64_t> origin;  // basis slots combined into this row
  bool rhs = false;

  bool test(std::size_t bit) const { return (coeffs[bit / 64] >> (bit % 64)) & 1; }
  void absorb(const Gf2Row& other) {
    for (std::size_t w = 0; w < coeffs.size(); ++w) coeffs[w] ^= other.coeffs[w];
    for (std::size_t w = 0; w < origin.size(); ++w) origin[w] ^= other.origin[w];
    rhs = rhs != other.rhs;
  }
};

}  // namespace

// ------------------------------------------------------------------- oracle

bool PlantedInstance::label(const Assignment& x) const {
  if (x.size() != n) throw Error(ErrorKind::arity, "PlantedInstance::label: assignment length differs from n");
  return label_of(core.values(), relevant, x) != 0;
}

PlantedInstance plant_instance(int n, int k, const SymmetricFunction& core, std::uint64_t seed) {
  if (k < 1 || k > n) {
    throw Error(ErrorKind::out_of_range, "plant_instance: need 1 <= k <= n (k = " + std::to_string(k) +
                                             ", n = " + std::to_string(n) + ")");
  }
  if (core.arity() != k) {
    throw Error(ErrorKind::arity, "plant_instance: core has arity " + std::to_string(core.arity()) +
                                      ", expected " + std::to_string(k));
  }
  CounterRng rng(seed, "plant");
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(perm[i], perm[j]);
  }
  PlantedInstance inst;
  inst.n = n;
  inst.relevant.assign(perm.begin(), perm.begin() + k);
  std::sort(inst.relevant.begin(), inst.relevant.end());
  inst.core = core;
  inst.seed = seed;
  return inst;
}

PlantedOracle::PlantedOracle(PlantedInstance instance, std::uint64_t seed)
    : instance_(std::move(instance)), stream_(seed, "draw") {}

std::vector<Example> PlantedOracle::draw(std::size_t m) {
  std::vector<Example> out;
  out.reserve(m);
  for (std::size_t e = 0; e < m; ++e) {
    Example ex;
    ex.x = random_assignment(stream_, instance_.n);
    ex.label = label_of(instance_.core.values(), instance_.relevant, ex.x) != 0;
    out.push_back(std::move(ex));
  }
  return out;
}

DatasetOracle::DatasetOracle(int n, std::vector<Example> examples) : n_(n), examples_(std::move(examples)) {
  for (const auto& ex : examples_) {
    if (ex.x.size() != n_) throw Error(ErrorKind::arity, "DatasetOracle: example length differs from n");
  }
}

std::vector<Example> DatasetOracle::draw(std::size_t m) {
  const std::size_t take = std::min(m, remaining());
  std::vector<Example> out(examples_.begin() + static_cast<std::ptrdiff_t>(next_),
                           examples_.begin() + static_cast<std::ptrdiff_t>(next_ + take));
  next_ += take;
  return out;
}

std::vector<Example> draw_examples(const PlantedInstance& inst, std::size_t m, std::uint64_t seed) {
  PlantedOracle oracle(inst, seed);
  return oracle.draw(m);
}

std::vector<Example> exhaustive_examples(const PlantedInstance& inst) {
  if (inst.n > kMaxTransformArity) {
    throw Error(ErrorKind::resource, "exhaustive_examples: n above " + std::to_string(kMaxTransformArity));
  }
  std::vector<Example> out;
  out.reserve(std::size_t{1} << inst.n);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << inst.n); ++x) {
    Example ex;
    ex.x = Assignment::from_index(x, inst.n);
    ex.label = label_of(inst.core.values(), inst.relevant, ex.x) != 0;
    out.push_back(std::move(ex));
  }
  return out;
}

// --------------------------------------------------------------- estimation

mpq_class estimate_coefficient(std::span<const Example> examples, std::span<const int> S) {
  if (examples.empty()) throw Error(ErrorKind::invalid_argument, "estimate_coefficient: no examples");
  long sum = 0;
  for (const auto& ex : examples) {
    if (!ex.label) continue;
    int parity = 0;
    for (int i : S) parity ^= ex.x[i];
    sum += parity ? -1 : 1;
  }
  mpq_class q(sum, static_cast<unsigned long>(examples.size()));
  q.canonicalize();
  return q;
}

EstimationPlan sample_size(int k, int n, int t_max, double delta) {
  check_delta(delta, "sample_size");
  if (t_max < 1 || t_max > n) {
    throw Error(ErrorKind::out_of_range, "sample_size: need 1 <= t_max <= n");
  }
  if (k < 1 || k > 28) throw Error(ErrorKind::out_of_range, "sample_size: need 1 <= k <= 28");
  EstimationPlan plan;
  plan.k = k;
  plan.n = n;
  plan.t_max = t_max;
  plan.delta = delta;
  mpz_class tau_den;
  mpz_ui_pow_ui(tau_den.get_mpz_t(), 2, static_cast<unsigned long>(k + 1));
  plan.tau = mpq_class(1, tau_den);
  plan.tested_sets_bound = 0;
  for (int l = 0; l <= t_max; ++l) plan.tested_sets_bound += binomial(n, l);
  // ln(T) from mantissa/exponent so huge T stays finite.
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, plan.tested_sets_bound.get_mpz_t());
  const long double ln_t = std::log(static_cast<long double>(mant)) + exp2 * std::log(2.0L);
  const long double inv_tau_sq = std::ldexp(1.0L, 2 * (k + 1));
  const long double m = 2.0L * inv_tau_sq * (std::log(2.0L) + ln_t - std::log(static_cast<long double>(delta)));
  plan.m = static_cast<std::uint64_t>(std::ceil(m));
  return plan;
}

// ------------------------------------------------------------------- parity

std::variant<ParityFit, ParityInconsistency> learn_parity(std::span<const Example> examples) {
  if (examples.empty()) throw Error(ErrorKind::invalid_argument, "learn_parity: no examples");
  const int n = examples.front().x.size();
  const std::size_t cols = static_cast<std::size_t>(n) + 1;  // a_0..a_{n-1}, b
  const std::size_t coeff_words = (cols + 63) / 64;
  const std::size_t slot_words = (cols + 1 + 63) / 64;

  std::vector<std::optional<Gf2Row>> pivot(cols);
  std::vector<std::size_t> slot_example;  // slot -> example index

  for (std::size_t e = 0; e < examples.size(); ++e) {
    const auto& ex = examples[e];
    if (ex.x.size() != n) throw Error(ErrorKind::arity, "learn_parity: examples differ in length");
    Gf2Row row{std::vector<std::uint64_t>(coeff_words, 0), std::vector<std::uint64_t>(slot_words, 0), ex.label};
    for (int i = 0; i < n; ++i) {
      if (ex.x[i]) row.coeffs[i / 64] |= std::uint64_t{1} << (i % 64);
    }
    row.coeffs[n / 64] |= std::uint64_t{1} << (n % 64);
    const std::size_t slot = slot_example.size();
    row.origin[slot / 64] |= std::uint64_t{1} << (slot % 64);

    bool inserted = false;
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row.test(c)) continue;
      if (pivot[c]) {
        row.absorb(*pivot[c]);
        continue;
      }
      pivot[c] = std::move(row);
      slot_example.push_back(e);
      inserted = true;
      break;
    }
    if (inserted || !row.rhs) continue;

    ParityInconsistency bad;
    for (std::size_t s = 0; s <= slot_example.size(); ++s) {
      if (!((row.origin[s / 64] >> (s % 64)) & 1)) continue;
      bad.witness.push_back(s < slot_example.size() ? slot_example[s] : e);
    }
    std::sort(bad.witness.begin(), bad.witness.end());
    return bad;
  }

  // Back-substitution, free variables set to zero.
  std::vector<std::uint8_t> value(cols, 0);
  for (std::size_t c = cols; c-- > 0;) {
    if (!pivot[c]) continue;
    bool v = pivot[c]->rhs;
    for (std::size_t d = c + 1; d < cols; ++d) {
      if (pivot[c]->test(d) && value[d]) v = !v;
    }
    value[c] = v;
  }
  ParityFit fit;
  for (int i = 0; i < n; ++i) {
    if (value[i]) fit.vars.push_back(i);
  }
  fit.complemented = value[n] != 0;
  fit.unique = std::all_of(pivot.begin(), pivot.end(), [](const auto& p) { return p.has_value(); });
  return fit;
}

// ------------------------------------------------------------- truth table

std::uint64_t class_hit_target(int k, double delta) {
  check_delta(delta, "class_hit_target");
  return static_cast<std::uint64_t>(std::ceil(std::log((k + 1) / delta) / std::log(2.0)));
}

TruthTableRecovery recover_truth_table(ExampleOracle& oracle, std::span<const int> relevant, double delta,
                                       std::uint64_t budget, std::span<const Example> pool) {
  if (relevant.empty()) throw Error(ErrorKind::out_of_range, "recover_truth_table: relevant set is empty");
  for (int i : relevant) {
    if (i < 0 || i >= oracle.vars()) throw Error(ErrorKind::out_of_range, "recover_truth_table: bad variable index");
  }
  const int k = static_cast<int>(relevant.size());
  const std::uint64_t target = class_hit_target(k, delta);
  TruthTableRecovery out;
  out.hits.assign(static_cast<std::size_t>(k) + 1, 0);
  std::vector<std::uint64_t> ones(static_cast<std::size_t>(k) + 1, 0);

  auto absorb = [&](std::span<const Example> batch) {
    for (const auto& ex : batch) {
      int w = 0;
      for (int i : relevant) w += ex.x[i];
      ++out.hits[w];
      ones[w] += ex.label;
    }
  };
  auto starving = [&] {
    return std::any_of(out.hits.begin(), out.hits.end(), [&](auto h) { return h < target; });
  };

  absorb(pool);
  while (starving() && out.drawn < budget) {
    const auto chunk = std::min<std::uint64_t>(budget - out.drawn, 4096);
    const auto batch = oracle.draw(chunk);
    if (batch.empty()) break;
    out.drawn += batch.size();
    absorb(batch);
  }

  std::vector<std::uint8_t> values(static_cast<std::size_t>(k) + 1);
  for (int w = 0; w <= k; ++w) {
    if (out.hits[w] == 0) {
      std::ostringstream msg;
      msg << "recover_truth_table: weight class " << w << " of " << k << " never observed after " << out.drawn
          << " extra draws (budget " << budget << "); a uniform draw hits it with probability C(" << k << ","
          << w << ")/2^" << k;
      throw Error(ErrorKind::budget, msg.str());
    }
    values[w] = 2 * ones[w] > out.hits[w] ? 1 : 0;
  }
  out.core = SymmetricFunction(std::move(values));
  return out;
}

// ---------------------------------------------------------------- pipeline

const char* to_string(JuntaClass c) noexcept {
  switch (c) {
    case JuntaClass::constant_zero: return "constant-0";
    case JuntaClass::constant_one: return "constant-1";
    case JuntaClass::parity: return "parity";
    case JuntaClass::parity_complement: return "parity-complement";
    case JuntaClass::general_symmetric: return "general-symmetric";
  }
  return "unknown";
}

nlohmann::ordered_json LearnResult::to_json() const {
  nlohmann::ordered_json j;
  j["class"] = to_string(cls);
  j["relevant"] = relevant;
  j["core"] = core.to_string();
  j["examples_used"] = examples_used;
  return j;
}

LearnResult learn_symmetric_junta(ExampleOracle& oracle, int k, double delta, const LearnOptions& options) {
  check_delta(delta, "learn_symmetric_junta");
  const int n = oracle.vars();
  if (k < 1 || n < 1) throw Error(ErrorKind::out_of_range, "learn_symmetric_junta: need k >= 1 and n >= 1");
  const int depth = std::min(k, n);
  const auto plan = sample_size(k, n, depth, delta / 2);
  const auto batch = oracle.draw(std::max<std::uint64_t>(plan.m, oracle.available().value_or(0)));
  if (batch.empty()) throw Error(ErrorKind::diagnostic, "learn_symmetric_junta: the oracle returned no examples");

  LearnResult result;
  result.examples_used = batch.size();

  const auto positives = std::count_if(batch.begin(), batch.end(), [](const auto& ex) { return ex.label; });
  if (positives == 0 || static_cast<std::size_t>(positives) == batch.size()) {
    result.cls = positives == 0 ? JuntaClass::constant_zero : JuntaClass::constant_one;
    result.core = positives == 0 ? SymmetricFunction::zero(0) : SymmetricFunction::one(0);
    return result;
  }

  if (auto fit = learn_parity(batch); std::holds_alternative<ParityFit>(fit)) {
    const auto& p = std::get<ParityFit>(fit);
    if (p.unique && !p.vars.empty()) {
      result.cls = p.complemented ? JuntaClass::parity_complement : JuntaClass::parity;
      result.relevant = p.vars;
      result.core = alternating(static_cast<int>(p.vars.size()), p.complemented);
      return result;
    }
  }

  const auto matrix = to_matrix(batch, n);
  const auto m = static_cast<unsigned __int128>(batch.size());
  for (int level = 1; level <= depth; ++level) {
    if (binomial(n, level) > kMaxSubsetsPerLevel) {
      throw Error(ErrorKind::resource, "learn_symmetric_junta: level " + std::to_string(level) + " has more than " +
                                           std::to_string(kMaxSubsetsPerLevel) + " subsets");
    }
    const auto subsets = subsets_of_size(n, level);
    const auto sums = kernels::level_sums_parallel(matrix, subsets, level);
    std::vector<int> found;
    for (std::size_t i = 0; i < sums.size(); ++i) {
      // |sum / m| > tau = 2^-(k+1), compared in integers.
      const auto mag = static_cast<unsigned __int128>(sums[i] < 0 ? -sums[i] : sums[i]);
      if ((mag << (k + 1)) > m) {
        found.insert(found.end(), subsets.begin() + static_cast<std::ptrdiff_t>(i * level),
                     subsets.begin() + static_cast<std::ptrdiff_t>((i + 1) * level));
      }
    }
    if (found.empty()) continue;
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());

    const std::uint64_t budget =
        options.truth_table_budget ? options.truth_table_budget
                                   : (std::uint64_t{1} << (std::min<int>(static_cast<int>(found.size()), 40) + 3)) *
                                         class_hit_target(static_cast<int>(found.size()), delta / 2);
    auto table = recover_truth_table(oracle, found, delta / 2, budget, batch);
    result.cls = JuntaClass::general_symmetric;
    result.relevant = std::move(found);
    result.core = std::move(table.core);
    result.examples_used += table.drawn;
    return result;
  }
  throw Error(ErrorKind::diagnostic,
              "learn_symmetric_junta: no coefficient above 2^-(k+1) at levels 1.." + std::to_string(depth) + " from " +
                  std::to_string(batch.size()) +
                  " examples, and the constant and parity tests failed (too few examples or not a symmetric "
                  "k-junta)");
}

// ---------------------------------------------------------------- file I/O

std::vector<Example> read_examples(std::istream& in) {
  std::vector<Example> out;
  std::string line;
  std::size_t line_no = 0;
  int n = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string bits, label, extra;
    fields >> bits >> label;
    const auto fail = [&](const std::string& why) {
      throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": " + why + ": '" + line + "'");
    };
    if (bits.empty() || label.empty()) fail("expected '<bitstring> <0|1>'");
    if (fields >> extra) fail("trailing fields");
    if (label != "0" && label != "1") fail("label must be 0 or 1");
    if (bits.find_first_not_of("01") != std::string::npos) fail("assignment must be a 0/1 string");
    if (n < 0) n = static_cast<int>(bits.size());
    if (static_cast<int>(bits.size()) != n) fail("assignment length differs from earlier lines");
    out.push_back({Assignment::parse(bits), label == "1"});
  }
  return out;
}

void write_examples(std::ostream& out, std::span<const Example> examples) {
  for (const auto& ex : examples) out << ex.x.to_string() << ' ' << (ex.label ? 1 : 0) << '\n';
}

OracleConfig OracleConfig::from_json(const nlohmann::json& j) {
  try {
    OracleConfig c;
    c.n = j.at("n").get<int>();
    c.k = j.at("k").get<int>();
    c.core = SymmetricFunction::parse(j.at("core").get<std::string>());
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("delta")) c.delta = j.at("delta").get<double>();
    if (c.core.arity() != c.k) {
      throw Error(ErrorKind::parse, "oracle config: core \"" + c.core.to_string() + "\" does not have k + 1 = " +
                                        std::to_string(c.k + 1) + " values");
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("oracle config: ") + e.what());
  }
}

}  // namespace symjunta
