#pragma once

// Boolean functions on the k-cube, symmetric functions given by their weight
// vector f_0..f_k, and exact Fourier analysis at integer scale 2^k.
//
// Conventions used throughout the library:
//   * variables are 0-based; bit i of a cube index is x_i;
//   * an assignment's text form lists x_0 first ("101" is x_0=1, x_1=0, x_2=1);
//   * a subset S of [k] is a bitmask, bit i set iff variable i is in S;
//   * coefficients are stored scaled: scaled(S) = 2^k * fhat(S), an integer.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace symjunta {

/// Largest arity accepted by fourier_transform (table of 2^24 entries).
inline constexpr int kMaxTransformArity = 24;

/// Largest arity for which level coefficients are kept in 64-bit integers.
inline constexpr int kMaxLevelArity = 60;

class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<std::uint8_t> bits);

  /// Parses a string of '0'/'1' characters; throws ErrorKind::parse otherwise.
  static Assignment parse(std::string_view text);

  /// Low `length` bits of `index`, x_i = bit i.
  static Assignment from_index(std::uint64_t index, int length);

  int size() const noexcept { return static_cast<int>(bits_.size()); }
  bool operator[](int i) const { return bits_[i] != 0; }
  int weight() const noexcept;
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::string to_string() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

class BooleanFunction {
 public:
  /// table[x] for x in [0, 2^k); entries must be 0 or 1.
  BooleanFunction(int k, std::vector<std::uint8_t> table);

  /// Builds the table from an arbitrary predicate over cube indices.
  template <typename Pred>
  static BooleanFunction tabulate(int k, Pred&& pred) {
    std::vector<std::uint8_t> table(std::size_t{1} << k);
    for (std::size_t x = 0; x < table.size(); ++x) table[x] = pred(x) ? 1 : 0;
    return BooleanFunction(k, std::move(table));
  }

  int arity() const noexcept { return k_; }
  std::uint8_t operator()(std::uint64_t x) const { return table_[x]; }
  std::span<const std::uint8_t> table() const noexcept { return table_; }
  BooleanFunction complement() const;

  friend bool operator==(const BooleanFunction&, const BooleanFunction&) = default;

 private:
  int k_;
  std::vector<std::uint8_t> table_;
};

class SymmetricFunction {
 public:
  /// values[w] = f_w, the value on inputs of weight w; length k + 1.
  explicit SymmetricFunction(std::vector<std::uint8_t> values);

  /// Parses the bitstring "f_0 f_1 ... f_k".
  static SymmetricFunction parse(std::string_view text);

  /// Enumeration order of the 2^(k+1) symmetric functions: f_w = bit w of index.
  static SymmetricFunction from_index(int k, std::uint64_t index);

  static SymmetricFunction zero(int k);
  static SymmetricFunction one(int k);
  static SymmetricFunction parity(int k);
  static SymmetricFunction parity_complement(int k);

  int arity() const noexcept { return static_cast<int>(values_.size()) - 1; }
  std::uint8_t value(int weight) const { return values_.at(weight); }
  std::span<const std::uint8_t> values() const noexcept { return values_; }
  std::uint64_t index() const;

  bool is_constant() const noexcept;
  /// f_w alternates (either parity or its complement); false for k = 0.
  bool is_parity_like() const noexcept;
  /// One of 0, 1, parity, parity complement.
  bool is_exceptional() const noexcept { return is_constant() || is_parity_like(); }

  SymmetricFunction complement() const;
  BooleanFunction expand() const;
  std::string to_string() const;

  friend bool operator==(const SymmetricFunction&, const SymmetricFunction&) = default;

 private:
  std::vector<std::uint8_t> values_;
};

/// f_w for w = weight(x); throws ErrorKind::arity if |x| != k.
bool eval_symmetric(const SymmetricFunction& f, const Assignment& x);

class FourierSpectrum {
 public:
  FourierSpectrum(int k, std::vector<std::int64_t> scaled,
                  std::optional<std::vector<std::int64_t>> levels = std::nullopt);

  int arity() const noexcept { return k_; }
  std::int64_t scale() const noexcept { return std::int64_t{1} << k_; }
  std::int64_t scaled(std::uint64_t subset) const { return scaled_.at(subset); }
  std::span<const std::int64_t> scaled_coeffs() const noexcept { return scaled_; }
  const std::optional<std::vector<std::int64_t>>& level_coeffs() const noexcept {
    return levels_;
  }

  /// f(x) = 2^-k * sum_S scaled(S) chi_S(x), returned as the integer 2^k f(x).
  std::int64_t reconstruct_scaled(std::uint64_t x) const;

  /// {"k", "scale", "levels"} when level data exists.
  nlohmann::ordered_json levels_json() const;
  /// Per-subset records in level order: [{"set": [...], "coeff": ...}, ...].
  nlohmann::ordered_json subsets_json() const;

 private:
  int k_;
  std::vector<std::int64_t> scaled_;
  std::optional<std::vector<std::int64_t>> levels_;
};

/// Masks of all subsets of [k] in increasing popcount, then lexicographic order
/// of their sorted element lists.
std::vector<std::uint64_t> subsets_in_level_order(int k);

/// Exact transform via the fast Walsh-Hadamard butterfly; k <= kMaxTransformArity.
FourierSpectrum fourier_transform(const BooleanFunction& f);

/// Spectrum of a symmetric function: expanded table plus per-level values.
FourierSpectrum fourier_transform(const SymmetricFunction& f);

/// Level table L[l][w] = sum_j (-1)^j C(l, j) C(k - l, w - j), the character sum
/// chi_S over the weight-w points for any fixed S with |S| = l.
class LevelTable {
 public:
  explicit LevelTable(int k);

  int arity() const noexcept { return k_; }
  std::int64_t operator()(int level, int weight) const {
    return entries_[static_cast<std::size_t>(level) * (k_ + 1) + weight];
  }
  std::span<const std::int64_t> row(int level) const {
    return {entries_.data() + static_cast<std::size_t>(level) * (k_ + 1),
            static_cast<std::size_t>(k_ + 1)};
  }

 private:
  int k_;
  std::vector<std::int64_t> entries_;
};

/// 2^k fhat(S) for |S| = level, without materializing the 2^k table.
std::int64_t level_coefficient(const SymmetricFunction& f, int level);

/// All k + 1 level values for an integer-valued symmetric source given by its
/// weight-class values (e.g. the {0,1,2}-valued symmetrization).
std::vector<std::int64_t> level_coefficients(std::span<const std::int64_t> class_values);
std::vector<std::int64_t> level_coefficients(const SymmetricFunction& f);

/// Smallest level >= 1 with a nonzero coefficient; nullopt exactly for constants.
std::optional<int> min_nonzero_order(const SymmetricFunction& f);
std::optional<int> min_nonzero_order(const SymmetricFunction& f, const LevelTable& table);

}  // namespace symjunta
