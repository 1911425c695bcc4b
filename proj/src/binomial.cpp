#include "symjunta/binomial.hpp"

#include <array>
#include <string>
#include <vector>

#include "symjunta/error.hpp"

namespace symjunta {
namespace {

class Triangle {
 public:
  explicit Triangle(int rows) : rows_(rows) {
    entries_.reserve(static_cast<std::size_t>(rows) * (rows + 1) / 2);
    for (int n = 0; n < rows; ++n) {
      for (int r = 0; r <= n; ++r) {
        if (r == 0 || r == n) {
          entries_.emplace_back(1);
        } else {
          entries_.push_back(at(n - 1, r - 1) + at(n - 1, r));
        }
      }
    }
  }

  int rows() const noexcept { return rows_; }
  const mpz_class& at(int n, int r) const {
    return entries_[static_cast<std::size_t>(n) * (n + 1) / 2 + r];
  }

 private:
  int rows_;
  std::vector<mpz_class> entries_;
};

const Triangle& shared_triangle() {
  static const Triangle triangle(kBinomialCacheRows);
  return triangle;
}

struct Table64 {
  std::array<std::array<std::int64_t, kBinomial64MaxN + 1>, kBinomial64MaxN + 1> c{};
  Table64() {
    for (int n = 0; n <= kBinomial64MaxN; ++n) {
      c[n][0] = 1;
      for (int r = 1; r <= n; ++r) c[n][r] = c[n - 1][r - 1] + (r < n ? c[n - 1][r] : 0);
    }
  }
};

}  // namespace

mpz_class binomial(long n, long r) {
  if (n < 0 || r < 0 || r > n) return 0;
  if (n < kBinomialCacheRows) return shared_triangle().at(static_cast<int>(n), static_cast<int>(r));
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(r));
  return out;
}

std::int64_t binomial64(int n, int r) {
  if (n > kBinomial64MaxN) {
    throw Error(ErrorKind::resource,
                "binomial64: n = " + std::to_string(n) + " exceeds " + std::to_string(kBinomial64MaxN));
  }
  if (n < 0 || r < 0 || r > n) return 0;
  static const Table64 table;
  return table.c[n][r];
}

}  // namespace symjunta
