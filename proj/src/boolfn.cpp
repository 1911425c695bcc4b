#include "symjunta/boolfn.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "symjunta/binomial.hpp"
#include "symjunta/error.hpp"
#include "symjunta/kernels.hpp"

namespace symjunta {
namespace {

std::vector<std::uint8_t> parse_bits(std::string_view text, const char* what) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw Error(ErrorKind::parse,
                  std::string(what) + ": expected a string of 0/1, got '" + std::string(text) + "'");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return bits;
}

void require_binary(std::span<const std::uint8_t> bits, const char* what) {
  for (auto b : bits) {
    if (b > 1) throw Error(ErrorKind::invalid_argument, std::string(what) + ": entries must be 0 or 1");
  }
}

}  // namespace

// ---------------------------------------------------------------- Assignment

Assignment::Assignment(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw Error(ErrorKind::invalid_argument, "Assignment: length must be >= 1");
  require_binary(bits_, "Assignment");
}

Assignment Assignment::parse(std::string_view text) {
  if (text.empty()) throw Error(ErrorKind::parse, "Assignment: empty bitstring");
  return Assignment(parse_bits(text, "Assignment"));
}

Assignment Assignment::from_index(std::uint64_t index, int length) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(length));
  for (int i = 0; i < length && i < 64; ++i) bits[i] = (index >> i) & 1;
  return Assignment(std::move(bits));
}

int Assignment::weight() const noexcept {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string Assignment::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
  return s;
}

// ----------------------------------------------------------- BooleanFunction

BooleanFunction::BooleanFunction(int k, std::vector<std::uint8_t> table)
    : k_(k), table_(std::move(table)) {
  if (k < 1 || k > 62) throw Error(ErrorKind::out_of_range, "BooleanFunction: arity must be in [1, 62]");
  if (table_.size() != (std::size_t{1} << k)) {
    throw Error(ErrorKind::arity, "BooleanFunction: table length must be 2^k");
  }
  require_binary(table_, "BooleanFunction");
}

BooleanFunction BooleanFunction::complement() const {
  auto t = table_;
  for (auto& v : t) v ^= 1;
  return BooleanFunction(k_, std::move(t));
}

// --------------------------------------------------------- SymmetricFunction

SymmetricFunction::SymmetricFunction(std::vector<std::uint8_t> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorKind::invalid_argument, "SymmetricFunction: need k + 1 >= 1 values");
  require_binary(values_, "SymmetricFunction");
}

SymmetricFunction SymmetricFunction::parse(std::string_view text) {
  if (text.empty()) throw Error(ErrorKind::parse, "SymmetricFunction: empty bitstring");
  return SymmetricFunction(parse_bits(text, "SymmetricFunction"));
}

SymmetricFunction SymmetricFunction::from_index(int k, std::uint64_t index) {
  std::vector<std::uint8_t> v(static_cast<std::size_t>(k) + 1);
  for (int w = 0; w <= k; ++w) v[w] = (index >> w) & 1;
  return SymmetricFunction(std::move(v));
}

SymmetricFunction SymmetricFunction::zero(int k) {
  return SymmetricFunction(std::vector<std::uint8_t>(static_cast<std::size_t>(k) + 1, 0));
}

SymmetricFunction SymmetricFunction::one(int k) {
  return SymmetricFunction(std::vector<std::uint8_t>(static_cast<std::size_t>(k) + 1, 1));
}

SymmetricFunction SymmetricFunction::parity(int k) {
  std::vector<std::uint8_t> v(static_cast<std::size_t>(k) + 1);
  for (int w = 0; w <= k; ++w) v[w] = w & 1;
  return SymmetricFunction(std::move(v));
}

SymmetricFunction SymmetricFunction::parity_complement(int k) {
  return parity(k).complement();
}

std::uint64_t SymmetricFunction::index() const {
  if (values_.size() > 64) throw Error(ErrorKind::resource, "SymmetricFunction::index: k >= 64");
  std::uint64_t idx = 0;
  for (std::size_t w = 0; w < values_.size(); ++w) idx |= std::uint64_t{values_[w]} << w;
  return idx;
}

bool SymmetricFunction::is_constant() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [&](auto v) { return v == values_.front(); });
}

bool SymmetricFunction::is_parity_like() const noexcept {
  if (values_.size() < 2) return false;
  for (std::size_t w = 1; w < values_.size(); ++w) {
    if (values_[w] == values_[w - 1]) return false;
  }
  return true;
}

SymmetricFunction SymmetricFunction::complement() const {
  auto v = values_;
  for (auto& b : v) b ^= 1;
  return SymmetricFunction(std::move(v));
}

BooleanFunction SymmetricFunction::expand() const {
  const int k = arity();
  if (k < 1 || k > kMaxTransformArity) {
    throw Error(ErrorKind::resource, "SymmetricFunction::expand: arity must be in [1, " +
                                         std::to_string(kMaxTransformArity) + "]");
  }
  return BooleanFunction::tabulate(k, [&](std::uint64_t x) { return values_[std::popcount(x)] != 0; });
}

std::string SymmetricFunction::to_string() const {
  std::string s(values_.size(), '0');
  for (std::size_t i = 0; i < values_.size(); ++i) s[i] = static_cast<char>('0' + values_[i]);
  return s;
}

bool eval_symmetric(const SymmetricFunction& f, const Assignment& x) {
  if (x.size() != f.arity()) {
    throw Error(ErrorKind::arity, "eval_symmetric: assignment has length " + std::to_string(x.size()) +
                                      ", function has arity " + std::to_string(f.arity()));
  }
  return f.value(x.weight()) != 0;
}

// ----------------------------------------------------------- FourierSpectrum

FourierSpectrum::FourierSpectrum(int k, std::vector<std::int64_t> scaled,
                                 std::optional<std::vector<std::int64_t>> levels)
    : k_(k), scaled_(std::move(scaled)), levels_(std::move(levels)) {
  if (scaled_.size() != (std::size_t{1} << k)) {
    throw Error(ErrorKind::arity, "FourierSpectrum: need 2^k coefficients");
  }
  if (levels_ && levels_->size() != static_cast<std::size_t>(k) + 1) {
    throw Error(ErrorKind::arity, "FourierSpectrum: need k + 1 level values");
  }
}

std::int64_t FourierSpectrum::reconstruct_scaled(std::uint64_t x) const {
  std::int64_t acc = 0;
  for (std::uint64_t s = 0; s < scaled_.size(); ++s) {
    acc += (std::popcount(x & s) & 1) ? -scaled_[s] : scaled_[s];
  }
  return acc;
}

nlohmann::ordered_json FourierSpectrum::levels_json() const {
  nlohmann::ordered_json j;
  j["k"] = k_;
  j["scale"] = scale();
  if (levels_) {
    j["levels"] = *levels_;
  } else {
    j["levels"] = nullptr;
  }
  return j;
}

nlohmann::ordered_json FourierSpectrum::subsets_json() const {
  auto records = nlohmann::ordered_json::array();
  for (std::uint64_t mask : subsets_in_level_order(k_)) {
    nlohmann::ordered_json rec;
    auto set = nlohmann::ordered_json::array();
    for (int i = 0; i < k_; ++i) {
      if ((mask >> i) & 1) set.push_back(i);
    }
    rec["set"] = std::move(set);
    rec["coeff"] = scaled_[mask];
    records.push_back(std::move(rec));
  }
  nlohmann::ordered_json j;
  j["k"] = k_;
  j["scale"] = scale();
  j["coefficients"] = std::move(records);
  return j;
}

std::vector<std::uint64_t> subsets_in_level_order(int k) {
  std::vector<std::uint64_t> masks(std::size_t{1} << k);
  std::iota(masks.begin(), masks.end(), std::uint64_t{0});
  // Lexicographic order of sorted element lists == descending order of the
  // bit-reversed mask within a level.
  auto lex_key = [k](std::uint64_t m) {
    std::uint64_t r = 0;
    for (int i = 0; i < k; ++i) r |= ((m >> i) & 1) << (k - 1 - i);
    return r;
  };
  std::sort(masks.begin(), masks.end(), [&](std::uint64_t a, std::uint64_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    return lex_key(a) > lex_key(b);
  });
  return masks;
}

FourierSpectrum fourier_transform(const BooleanFunction& f) {
  const int k = f.arity();
  if (k > kMaxTransformArity) {
    throw Error(ErrorKind::resource, "fourier_transform: arity " + std::to_string(k) + " exceeds cap " +
                                         std::to_string(kMaxTransformArity));
  }
  std::vector<std::int64_t> data(f.table().begin(), f.table().end());
  kernels::walsh_hadamard_parallel(data);
  return FourierSpectrum(k, std::move(data));
}

FourierSpectrum fourier_transform(const SymmetricFunction& f) {
  auto spectrum = fourier_transform(f.expand());
  return FourierSpectrum(f.arity(),
                         std::vector<std::int64_t>(spectrum.scaled_coeffs().begin(),
                                                   spectrum.scaled_coeffs().end()),
                         level_coefficients(f));
}

// ---------------------------------------------------------------- LevelTable

LevelTable::LevelTable(int k) : k_(k) {
  if (k < 0 || k > kMaxLevelArity) {
    throw Error(ErrorKind::resource, "LevelTable: arity must be in [0, " + std::to_string(kMaxLevelArity) + "]");
  }
  entries_.assign(static_cast<std::size_t>(k + 1) * (k + 1), 0);
  for (int l = 0; l <= k; ++l) {
    for (int w = 0; w <= k; ++w) {
      std::int64_t acc = 0;
      // j = |x ∩ S|: C(l, j) ways inside S, C(k - l, w - j) outside.
      for (int j = 0; j <= std::min(l, w); ++j) {
        const std::int64_t term = binomial64(l, j) * binomial64(k - l, w - j);
        acc += (j & 1) ? -term : term;
      }
      entries_[static_cast<std::size_t>(l) * (k + 1) + w] = acc;
    }
  }
}

std::int64_t level_coefficient(const SymmetricFunction& f, int level) {
  const int k = f.arity();
  if (level < 0 || level > k) {
    throw Error(ErrorKind::out_of_range,
                "level_coefficient: level " + std::to_string(level) + " outside [0, " + std::to_string(k) + "]");
  }
  if (k > kMaxLevelArity) throw Error(ErrorKind::resource, "level_coefficient: arity above 64-bit range");
  std::int64_t acc = 0;
  for (int w = 0; w <= k; ++w) {
    if (!f.value(w)) continue;
    for (int j = 0; j <= std::min(level, w); ++j) {
      const std::int64_t term = binomial64(level, j) * binomial64(k - level, w - j);
      acc += (j & 1) ? -term : term;
    }
  }
  return acc;
}

std::vector<std::int64_t> level_coefficients(std::span<const std::int64_t> class_values) {
  const int k = static_cast<int>(class_values.size()) - 1;
  const LevelTable table(k);
  std::vector<std::int64_t> out(class_values.size(), 0);
  for (int l = 0; l <= k; ++l) {
    auto row = table.row(l);
    std::int64_t acc = 0;
    for (int w = 0; w <= k; ++w) acc += class_values[w] * row[w];
    out[l] = acc;
  }
  return out;
}

std::vector<std::int64_t> level_coefficients(const SymmetricFunction& f) {
  std::vector<std::int64_t> values(f.values().begin(), f.values().end());
  return level_coefficients(values);
}

std::optional<int> min_nonzero_order(const SymmetricFunction& f, const LevelTable& table) {
  const int k = f.arity();
  if (table.arity() != k) throw Error(ErrorKind::arity, "min_nonzero_order: level table arity mismatch");
  for (int l = 1; l <= k; ++l) {
    auto row = table.row(l);
    std::int64_t acc = 0;
    for (int w = 0; w <= k; ++w) {
      if (f.value(w)) acc += row[w];
    }
    if (acc != 0) return l;
  }
  return std::nullopt;
}

std::optional<int> min_nonzero_order(const SymmetricFunction& f) {
  return min_nonzero_order(f, LevelTable(f.arity()));
}

}  // namespace symjunta
