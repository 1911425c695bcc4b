#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "symjunta/boolfn.hpp"
#include "symjunta/error.hpp"
#include "symjunta/learner.hpp"
#include "symjunta/moments.hpp"
#include "symjunta/numtheory.hpp"
#include "symjunta/structure.hpp"

namespace symjunta::cli {
namespace {

using ojson = nlohmann::ordered_json;

struct Bound {
  enum class Form { constant, linear, over_log } form = Form::constant;
  std::string coeff = "1";
  std::string divisor = "1";
};

Bound parse_bound(const std::string& expr) {
  static const std::regex constant(R"(^\s*(\d+)\s*$)");
  static const std::regex linear(
      R"(^\s*(?:(\d+(?:\.\d+)?)\s*\*?\s*)?k\s*(?:/\s*(?:(\d+(?:\.\d+)?)|(ln\s*\(\s*k\s*\))))?\s*$)");
  std::smatch m;
  Bound b;
  if (std::regex_match(expr, m, constant)) {
    b.coeff = m[1];
    return b;
  }
  if (!std::regex_match(expr, m, linear)) {
    throw Error(ErrorKind::parse, "bound expression '" + expr +
                                      "' not understood; use an integer, A*k/B, Ak/B, k or C*k/ln(k)");
  }
  b.form = m[3].matched ? Bound::Form::over_log : Bound::Form::linear;
  if (m[1].matched) b.coeff = m[1];
  if (m[2].matched) b.divisor = m[2];
  if (b.form == Bound::Form::linear && std::stold(b.divisor) == 0) {
    throw Error(ErrorKind::parse, "bound expression '" + expr + "' divides by zero");
  }
  return b;
}

bool is_integer_literal(const std::string& s) { return s.find('.') == std::string::npos; }

int evaluate(const Bound& b, int k) {
  switch (b.form) {
    case Bound::Form::constant:
      return std::stoi(b.coeff);
    case Bound::Form::linear:
      if (is_integer_literal(b.coeff) && is_integer_literal(b.divisor)) {
        return static_cast<int>(std::stoll(b.coeff) * k / std::stoll(b.divisor));
      }
      return static_cast<int>(std::floor(std::stold(b.coeff) * k / std::stold(b.divisor)));
    case Bound::Form::over_log:
      if (k < 2) throw Error(ErrorKind::out_of_range, "C*k/ln(k) needs k >= 2");
      return static_cast<int>(std::floor(std::stold(b.coeff) * k / std::log(static_cast<long double>(k))));
  }
  return 0;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::resource: return kExitResource;
    case ErrorKind::fit:
    case ErrorKind::budget:
    case ErrorKind::unavailable:
    case ErrorKind::diagnostic: return kExitDiagnostic;
    default: return kExitUsage;
  }
}

int enumeration_cap() {
  const char* raw = std::getenv(kEnumCapVariable);
  if (raw == nullptr || *raw == '\0') return kDefaultEnumerationCap;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 1 || v > kMaxLevelArity) {
    throw Error(ErrorKind::parse, std::string(kEnumCapVariable) + " must be an integer in [1, " +
                                      std::to_string(kMaxLevelArity) + "], got '" + raw + "'");
  }
  return static_cast<int>(v);
}

// Writes to --output when given, otherwise to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw Error(ErrorKind::invalid_argument, "cannot open output file '" + path + "'");
    stream_ = &file_;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void emit(std::ostream& out, const ojson& j) { out << j.dump(2) << '\n'; }

ojson min_order_row(const SymmetricFunction& f, const LevelTable& table) {
  ojson row;
  row["function"] = f.to_string();
  const auto order = min_nonzero_order(f, table);
  if (order) {
    row["min_order"] = *order;
  } else {
    row["min_order"] = nullptr;
  }
  row["exceptional"] = f.is_exceptional();
  return row;
}

std::string order_text(const ojson& row) {
  return row["min_order"].is_null() ? "none" : std::to_string(row["min_order"].get<int>());
}

struct Common {
  std::string format = "json";
  std::string output;
  std::uint64_t shard_count = 1;
  std::uint64_t shard_index = 0;
};

void add_format(CLI::App* sub, Common& c, std::vector<std::string> formats) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember(std::move(formats)));
  sub->add_option("--output,-o", c.output, "Write data here instead of stdout");
}

void add_shard(CLI::App* sub, Common& c) {
  sub->add_option("--shard-count", c.shard_count, "Split the enumeration into this many blocks")
      ->check(CLI::PositiveNumber);
  sub->add_option("--shard-index", c.shard_index, "Block to process (0-based)");
}

// ---------------------------------------------------------------- commands

struct MinOrderArgs {
  Common common;
  int k = 0;
  std::string f;
  bool all = false;
};

int cmd_min_order(const MinOrderArgs& a, std::ostream& out) {
  Sink sink(a.common.output, out);
  const Shard shard{a.common.shard_count, a.common.shard_index};
  if (!a.all && a.f.empty()) throw Error(ErrorKind::parse, "min-order needs --f or --all");
  if (!a.all) {
    if (a.k < 0 || a.k > kMaxLevelArity) {
      throw Error(ErrorKind::resource, "k = " + std::to_string(a.k) + " above " + std::to_string(kMaxLevelArity));
    }
    const auto f = SymmetricFunction::parse(a.f);
    if (f.arity() != a.k) {
      throw Error(ErrorKind::arity, "--f has " + std::to_string(f.arity() + 1) + " values, expected k + 1 = " +
                                        std::to_string(a.k + 1));
    }
    const auto row = min_order_row(f, LevelTable(a.k));
    if (a.common.format == "json") {
      ojson j;
      j["k"] = a.k;
      for (const auto& [key, value] : row.items()) j[key] = value;
      emit(*sink, j);
    } else if (a.common.format == "csv") {
      *sink << "function,min_order,exceptional\n"
            << f.to_string() << ',' << order_text(row) << ',' << (f.is_exceptional() ? 1 : 0) << '\n';
    } else {
      *sink << order_text(row) << '\n';
    }
    return kExitOk;
  }

  const int cap = enumeration_cap();
  if (a.common.format == "csv") {
    write_min_order_csv(*sink, a.k, shard, cap);
    return kExitOk;
  }
  // Reuse the CSV writer for the cap and shard checks, then re-render.
  std::ostringstream csv;
  write_min_order_csv(csv, a.k, shard, cap);
  std::istringstream rows(csv.str());
  std::string line;
  std::getline(rows, line);  // header
  ojson list = ojson::array();
  while (std::getline(rows, line)) {
    std::istringstream fields(line);
    std::string fn, order, exceptional;
    std::getline(fields, fn, ',');
    std::getline(fields, order, ',');
    std::getline(fields, exceptional, ',');
    if (a.common.format == "text") {
      *sink << fn << ' ' << order << (exceptional == "1" ? " exceptional" : "") << '\n';
      continue;
    }
    ojson row;
    row["function"] = fn;
    if (order == "none") {
      row["min_order"] = nullptr;
    } else {
      row["min_order"] = std::stoi(order);
    }
    row["exceptional"] = exceptional == "1";
    list.push_back(std::move(row));
  }
  if (a.common.format == "json") {
    ojson j;
    j["k"] = a.k;
    j["shard"] = {{"count", shard.count}, {"index", shard.index}};
    j["rows"] = std::move(list);
    emit(*sink, j);
  }
  return kExitOk;
}

struct VerifyArgs {
  Common common;
  int k_min = 2;
  int k_max = 14;
  std::string bound = "2k/3";
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const auto bound = parse_bound(a.bound);
  if (a.k_min < 1 || a.k_max < a.k_min) throw Error(ErrorKind::out_of_range, "need 1 <= k-min <= k-max");
  const int cap = enumeration_cap();
  if (a.k_max > cap) {
    throw Error(ErrorKind::resource, "k-max = " + std::to_string(a.k_max) + " exceeds the enumeration cap " +
                                         std::to_string(cap) + " (raise " + kEnumCapVariable + ")");
  }
  const Shard shard{a.common.shard_count, a.common.shard_index};
  const BoundFn fn = [&](int k) { return evaluate(bound, k); };

  std::vector<VerificationReport> reports;
  std::uint64_t counterexamples = 0;
  for (int k = a.k_min; k <= a.k_max; ++k) {
    reports.push_back(enumerate_and_verify(k, fn, shard, cap));
    const auto& r = reports.back();
    counterexamples += r.counterexample_count;
    err << "verify: k=" << k << " bound=" << r.bound << " max_min_order=" << r.max_min_order
        << " counterexamples=" << r.counterexample_count << '\n';
  }

  Sink sink(a.common.output, out);
  if (a.common.format == "json") {
    ojson j;
    j["bound"] = a.bound;
    j["k_min"] = a.k_min;
    j["k_max"] = a.k_max;
    j["counterexample_count"] = counterexamples;
    j["verified"] = counterexamples == 0;
    j["reports"] = ojson::array();
    for (const auto& r : reports) j["reports"].push_back(r.to_json());
    emit(*sink, j);
  } else if (a.common.format == "csv") {
    *sink << "k,bound,functions,max_min_order,argmax_count,counterexample_count\n";
    for (const auto& r : reports) {
      *sink << r.k << ',' << r.bound << ',' << r.functions << ',' << r.max_min_order << ',' << r.argmax_count << ','
            << r.counterexample_count << '\n';
    }
  } else {
    for (const auto& r : reports) {
      *sink << "k=" << r.k << " bound=" << r.bound << " max_min_order=" << r.max_min_order;
      if (r.counterexample_count) {
        *sink << " counterexamples=" << r.counterexample_count << ':';
        for (const auto& c : r.counterexamples) *sink << ' ' << c;
      }
      *sink << '\n';
    }
  }
  return counterexamples == 0 ? kExitOk : kExitCounterexample;
}

struct LearnArgs {
  Common common;
  std::string config;
  std::string dataset;
  std::optional<int> n;
  std::optional<int> k;
  std::string core;
  std::uint64_t seed = 0;
  std::optional<double> delta;
  std::uint64_t budget = 0;
};

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, path + ": " + e.what());
  }
}

int cmd_learn(const LearnArgs& a, std::ostream& out, std::ostream& err) {
  LearnOptions options;
  options.truth_table_budget = a.budget;
  LearnResult result;

  if (!a.dataset.empty()) {
    if (!a.k) throw Error(ErrorKind::parse, "--dataset needs --k");
    std::ifstream in(a.dataset);
    if (!in) throw Error(ErrorKind::parse, "cannot open '" + a.dataset + "'");
    std::vector<Example> examples;
    try {
      examples = read_examples(in);
    } catch (const Error& e) {
      throw Error(e.kind(), a.dataset + ": " + e.what());
    }
    if (examples.empty()) throw Error(ErrorKind::parse, a.dataset + ": no examples");
    const int n = examples.front().x.size();
    DatasetOracle oracle(n, std::move(examples));
    err << "learn: dataset " << a.dataset << " with n=" << n << " and " << oracle.remaining() << " examples\n";
    result = learn_symmetric_junta(oracle, *a.k, a.delta.value_or(0.05), options);
  } else {
    OracleConfig cfg;
    if (!a.config.empty()) {
      cfg = OracleConfig::from_json(read_json_file(a.config));
    } else {
      if (!a.n || !a.k || a.core.empty()) {
        throw Error(ErrorKind::parse, "learn needs --config, --dataset, or all of --n --k --core");
      }
      cfg.n = *a.n;
      cfg.k = *a.k;
      cfg.core = SymmetricFunction::parse(a.core);
      cfg.seed = a.seed;
    }
    if (a.delta) cfg.delta = *a.delta;
    auto inst = plant_instance(cfg.n, cfg.k, cfg.core, cfg.seed);
    err << "learn: planted core " << inst.core.to_string() << " on variables";
    for (int v : inst.relevant) err << ' ' << v;
    err << " of n=" << inst.n << '\n';
    PlantedOracle oracle(std::move(inst), cfg.seed);
    result = learn_symmetric_junta(oracle, cfg.k, cfg.delta, options);
  }
  Sink sink(a.common.output, out);
  emit(*sink, result.to_json());
  return kExitOk;
}

struct SampleArgs {
  Common common;
  int n = 0;
  int k = 0;
  std::string core;
  std::uint64_t seed = 0;
  std::uint64_t m = 0;
  bool exhaustive = false;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  const auto inst = plant_instance(a.n, a.k, SymmetricFunction::parse(a.core), a.seed);
  if (!a.exhaustive && a.m == 0) throw Error(ErrorKind::parse, "sample needs --m or --exhaustive");
  const auto examples = a.exhaustive ? exhaustive_examples(inst) : draw_examples(inst, a.m, a.seed);
  Sink sink(a.common.output, out);
  write_examples(*sink, examples);
  return kExitOk;
}

struct PrimesArgs {
  Common common;
  std::uint64_t lo = 2;
  std::uint64_t hi = 2;
  std::optional<std::uint64_t> modulus;
  std::uint64_t residue = 1;
};

int cmd_primes(const PrimesArgs& a, std::ostream& out) {
  if (a.lo > a.hi) throw Error(ErrorKind::out_of_range, "need lo <= hi");
  ojson j;
  std::vector<std::uint64_t> primes;
  if (a.modulus) {
    const auto q = primes_in_ap(std::max<std::uint64_t>(a.lo, 2), std::max<std::uint64_t>(a.hi, 2), *a.modulus,
                                a.residue);
    j = q.to_json();
    j["lo"] = a.lo;
    j["hi"] = a.hi;
    primes = q.primes;
  } else {
    if (a.hi >= 2) primes = primes_in_interval(std::max<std::uint64_t>(a.lo, 2), a.hi);
    j["lo"] = a.lo;
    j["hi"] = a.hi;
    j["count"] = primes.size();
    j["primes"] = primes;
  }
  Sink sink(a.common.output, out);
  if (a.common.format == "text") {
    for (std::size_t i = 0; i < primes.size(); ++i) *sink << (i ? " " : "") << primes[i];
    *sink << '\n';
  } else {
    emit(*sink, j);
  }
  return kExitOk;
}

struct LucasArgs {
  Common common;
  std::uint64_t m = 0, l = 0, r = 2;
};

int cmd_lucas(const LucasArgs& a, std::ostream& out) {
  const auto check = lucas_check(a.m, a.l, a.r);
  Sink sink(a.common.output, out);
  emit(*sink, check.to_json());
  return check.passed() ? kExitOk : kExitCounterexample;
}

struct MomentsArgs {
  Common common;
  std::string f;
  int r = 0;
};

int cmd_moments(const MomentsArgs& a, std::ostream& out) {
  const auto f = SymmetricFunction::parse(a.f);
  const auto report = moment_match_report(CubeMeasure::induced(f), a.r);
  Sink sink(a.common.output, out);
  emit(*sink, report.to_json());
  return kExitOk;
}

struct CertificateArgs {
  Common common;
  long N = 0, k = 0;
};

int cmd_certificate(const CertificateArgs& a, std::ostream& out) {
  const auto cert = two_periodicity_certificate(a.N, a.k);
  Sink sink(a.common.output, out);
  emit(*sink, cert.to_json());
  return check_certificate(cert) ? kExitOk : kExitCounterexample;
}

struct SpectrumArgs {
  Common common;
  std::string f;
  bool subsets = false;
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out) {
  const auto f = SymmetricFunction::parse(a.f);
  const auto spectrum = fourier_transform(f);
  Sink sink(a.common.output, out);
  emit(*sink, a.subsets ? spectrum.subsets_json() : spectrum.levels_json());
  return kExitOk;
}

}  // namespace

int evaluate_bound(const std::string& expr, int k) { return evaluate(parse_bound(expr), k); }

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetric junta learning and exact structure checks"};
  app.require_subcommand(1);

  MinOrderArgs mo;
  auto* sub_mo = app.add_subcommand("min-order", "Smallest nonzero Fourier level of symmetric functions");
  sub_mo->add_option("--k", mo.k, "Arity")->required();
  auto* opt_f = sub_mo->add_option("--f", mo.f, "Function as f_0..f_k bits");
  auto* opt_all = sub_mo->add_flag("--all", mo.all, "Enumerate every symmetric function of arity k");
  opt_f->excludes(opt_all);
  add_format(sub_mo, mo.common, {"json", "csv", "text"});
  add_shard(sub_mo, mo.common);

  VerifyArgs ve;
  auto* sub_ve = app.add_subcommand("verify", "Check max min-order against a bound over a range of k");
  sub_ve->add_option("--k-min", ve.k_min, "Smallest k")->capture_default_str();
  sub_ve->add_option("--k-max", ve.k_max, "Largest k")->capture_default_str();
  sub_ve->add_option("--bound", ve.bound, "Bound expression in k")->capture_default_str();
  add_format(sub_ve, ve.common, {"json", "csv", "text"});
  add_shard(sub_ve, ve.common);

  LearnArgs le;
  auto* sub_le = app.add_subcommand("learn", "Learn a symmetric junta from examples");
  sub_le->add_option("--config", le.config, "Oracle config JSON file");
  sub_le->add_option("--dataset", le.dataset, "Example file, one '<bits> <label>' per line");
  sub_le->add_option("--n", le.n, "Number of variables");
  sub_le->add_option("--k", le.k, "Junta size bound");
  sub_le->add_option("--core", le.core, "Planted core f_0..f_k");
  sub_le->add_option("--seed", le.seed, "Seed for planting and drawing");
  sub_le->add_option("--delta", le.delta, "Failure probability");
  sub_le->add_option("--budget", le.budget, "Extra draws allowed for truth-table recovery (0 = default)");
  add_format(sub_le, le.common, {"json"});

  SampleArgs sa;
  auto* sub_sa = app.add_subcommand("sample", "Write labeled examples of a planted junta");
  sub_sa->add_option("--n", sa.n, "Number of variables")->required();
  sub_sa->add_option("--k", sa.k, "Junta size")->required();
  sub_sa->add_option("--core", sa.core, "Core f_0..f_k")->required();
  sub_sa->add_option("--seed", sa.seed, "Seed");
  sub_sa->add_option("--m", sa.m, "Number of uniform examples");
  sub_sa->add_flag("--exhaustive", sa.exhaustive, "Every point of the cube once");
  add_format(sub_sa, sa.common, {"text"});

  PrimesArgs pr;
  auto* sub_pr = app.add_subcommand("primes", "Primes in an interval, optionally in a residue class");
  sub_pr->add_option("--lo", pr.lo, "Lower end")->required();
  sub_pr->add_option("--hi", pr.hi, "Upper end")->required();
  sub_pr->add_option("--modulus", pr.modulus, "Modulus M");
  sub_pr->add_option("--residue", pr.residue, "Residue a (mod M)")->capture_default_str();
  add_format(sub_pr, pr.common, {"json", "text"});

  LucasArgs lu;
  auto* sub_lu = app.add_subcommand("lucas", "Check C(m r, l r) = C(m, l) and the vanishing congruence mod r");
  sub_lu->add_option("--m", lu.m, "m")->required();
  sub_lu->add_option("--l", lu.l, "l")->required();
  sub_lu->add_option("--r", lu.r, "Prime r")->required();
  add_format(sub_lu, lu.common, {"json"});

  MomentsArgs mm;
  auto* sub_mm = app.add_subcommand("moments", "Compare moments of the induced and uniform measures");
  sub_mm->add_option("--f", mm.f, "Function f_0..f_k")->required();
  sub_mm->add_option("--r", mm.r, "Highest order compared")->required();
  add_format(sub_mm, mm.common, {"json"});

  CertificateArgs ce;
  auto* sub_ce = app.add_subcommand("certificate", "Prime pair certificate for a window [N, k]");
  sub_ce->add_option("--N", ce.N, "N")->required();
  sub_ce->add_option("--k", ce.k, "k")->required();
  add_format(sub_ce, ce.common, {"json"});

  SpectrumArgs sp;
  auto* sub_sp = app.add_subcommand("spectrum", "Fourier spectrum of a symmetric function");
  sub_sp->add_option("--f", sp.f, "Function f_0..f_k")->required();
  sub_sp->add_flag("--subsets", sp.subsets, "One record per subset instead of per level");
  add_format(sub_sp, sp.common, {"json"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sub_mo) return cmd_min_order(mo, out);
    if (*sub_ve) return cmd_verify(ve, out, err);
    if (*sub_le) return cmd_learn(le, out, err);
    if (*sub_sa) return cmd_sample(sa, out);
    if (*sub_pr) return cmd_primes(pr, out);
    if (*sub_lu) return cmd_lucas(lu, out);
    if (*sub_mm) return cmd_moments(mm, out);
    if (*sub_ce) return cmd_certificate(ce, out);
    if (*sub_sp) return cmd_spectrum(sp, out);
  } catch (const Error& e) {
    err << "symjunta: " << to_string(e.kind()) << " error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "symjunta: error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace symjunta::cli
