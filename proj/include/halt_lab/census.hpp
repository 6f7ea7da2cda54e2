#pragma once

// Exact program/prefix counting, shortlex enumeration and numbering, and
// the Cantor pairing function.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace halt_lab {

using Natural = boost::multiprecision::cpp_int;

/// An exact non-negative rational, kept unreduced so `6/8` prints as such.
struct Ratio {
  Natural num;
  Natural den{1};

  std::string str() const;
  /// Decimal rendering with `digits` fractional digits, truncated (exact).
  std::string decimal(unsigned digits = 12) const;
  double approx() const;

  friend bool operator<(const Ratio& a, const Ratio& b) { return a.num * b.den < b.num * a.den; }
  friend bool operator<=(const Ratio& a, const Ratio& b) { return a.num * b.den <= b.num * a.den; }
  friend bool operator==(const Ratio& a, const Ratio& b) { return a.num * b.den == b.num * a.den; }
};

/// Number of balanced-bracket strings of length n over the BF alphabet.
Natural countPrograms(std::size_t n);

/// Number of length-n strings whose running bracket depth never goes negative.
Natural countPrefixes(std::size_t n);

/// 8^n.
Natural sigmaPow(std::size_t n);

struct CountTable {
  std::size_t n = 0;
  Natural p;
  Natural q;
  Natural sigma_pow;

  Ratio pRatio() const { return {p, sigma_pow}; }
  Ratio qRatio() const { return {q, sigma_pow}; }
};

struct VanishingReport {
  std::vector<CountTable> rows;
  /// q(n+1) <= 8 q(n) - p(n) for every consecutive pair of rows.
  bool prefix_inequality_holds = true;
  /// n values where the inequality is tight.
  std::vector<std::size_t> tight_at;
};

/// Tabulates p, q and 8^n for 0 <= n <= n_max and checks the prefix
/// inequality exactly. Throws std::invalid_argument when n_max < 2.
VanishingReport vanishingReport(std::size_t n_max);

/// Lazily yields the valid programs of one size in ascending byte order.
/// Generation is depth-pruned: invalid strings are never materialised.
class ProgramEnumerator {
 public:
  explicit ProgramEnumerator(std::size_t n);

  std::optional<std::string> next();

 private:
  bool descend(std::size_t from);

  std::size_t n_;
  std::string current_;
  std::vector<int> symbol_;  // alphabet index chosen at each position
  std::vector<int> depth_;   // depth before each position
  bool started_ = false;
  bool done_ = false;
};

/// All programs of size n, in shortlex (ascending byte) order.
std::vector<std::string> enumeratePrograms(std::size_t n);

/// Every string of length n over `alphabet` in lexicographic order.
std::vector<std::string> enumerateStrings(std::size_t n, std::string_view alphabet);

/// Shortlex numbering over an ordered alphabet (symbols in ascending order).
class ShortlexCodec {
 public:
  explicit ShortlexCodec(std::string alphabet = std::string(kDefaultAlphabet));

  Natural index(std::string_view s) const;
  std::string string(const Natural& index) const;

  const std::string& alphabet() const noexcept { return alphabet_; }

  static constexpr std::string_view kDefaultAlphabet = "+,-.<>[]";

 private:
  std::string alphabet_;
  int rank_[256];
};

Natural shortlexIndex(std::string_view s);
std::string shortlexString(const Natural& index);

/// x + (x+y)(x+y+1)/2.
Natural cantorPair(const Natural& x, const Natural& y);
std::pair<Natural, Natural> cantorUnpair(const Natural& z);

}  // namespace halt_lab
