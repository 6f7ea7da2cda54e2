#include "halt_lab/census.hpp"

#include "halt_lab/bf.hpp"

#include <algorithm>
#include <stdexcept>

namespace halt_lab {

namespace mp = boost::multiprecision;

std::string Ratio::str() const { return num.str() + "/" + den.str(); }

std::string Ratio::decimal(unsigned digits) const {
  if (den == 0) return "nan";
  Natural scale = mp::pow(Natural(10), digits);
  Natural scaled = num * scale / den;
  Natural whole = scaled / scale;
  std::string frac = Natural(scaled % scale).str();
  if (digits == 0) return whole.str();
  frac.insert(0, digits - frac.size(), '0');
  return whole.str() + "." + frac;
}

double Ratio::approx() const { return den == 0 ? 0.0 : std::stod(decimal(17)); }

namespace {

// Strings of length n tallied by final bracket depth; depth never negative.
std::vector<Natural> depthProfile(std::size_t n) {
  std::vector<Natural> cur(1, Natural(1));
  for (std::size_t len = 0; len < n; ++len) {
    std::vector<Natural> next(cur.size() + 1);
    for (std::size_t d = 0; d < cur.size(); ++d) {
      if (cur[d] == 0) continue;
      next[d] += cur[d] * 6;
      next[d + 1] += cur[d];
      if (d > 0) next[d - 1] += cur[d];
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

Natural countPrograms(std::size_t n) { return depthProfile(n)[0]; }

Natural countPrefixes(std::size_t n) {
  Natural total = 0;
  for (const auto& c : depthProfile(n)) total += c;
  return total;
}

Natural sigmaPow(std::size_t n) { return mp::pow(Natural(8), static_cast<unsigned>(n)); }

VanishingReport vanishingReport(std::size_t n_max) {
  if (n_max < 2) throw std::invalid_argument("vanishing report needs n_max >= 2");
  VanishingReport report;
  std::vector<Natural> cur(1, Natural(1));
  for (std::size_t n = 0; n <= n_max; ++n) {
    CountTable row;
    row.n = n;
    row.p = cur[0];
    for (const auto& c : cur) row.q += c;
    row.sigma_pow = sigmaPow(n);
    report.rows.push_back(std::move(row));

    std::vector<Natural> next(cur.size() + 1);
    for (std::size_t d = 0; d < cur.size(); ++d) {
      next[d] += cur[d] * 6;
      next[d + 1] += cur[d];
      if (d > 0) next[d - 1] += cur[d];
    }
    cur = std::move(next);
  }
  for (std::size_t n = 0; n + 1 < report.rows.size(); ++n) {
    const auto& a = report.rows[n];
    const auto& b = report.rows[n + 1];
    const Natural bound = 8 * a.q - a.p;
    if (b.q > bound) report.prefix_inequality_holds = false;
    if (b.q == bound) report.tight_at.push_back(n);
  }
  return report;
}

ProgramEnumerator::ProgramEnumerator(std::size_t n)
    : n_(n), current_(n, '\0'), symbol_(n, -1), depth_(n + 1, 0) {}

// Fills positions [from, n) with the smallest admissible symbols.
bool ProgramEnumerator::descend(std::size_t from) {
  for (std::size_t i = from; i < n_; ++i) {
    const int d = depth_[i];
    const std::size_t remaining = n_ - i - 1;
    bool placed = false;
    for (int s = 0; s < static_cast<int>(kBfAlphabet.size()); ++s) {
      const char c = kBfAlphabet[s];
      const int nd = c == '[' ? d + 1 : c == ']' ? d - 1 : d;
      if (nd < 0 || static_cast<std::size_t>(nd) > remaining) continue;
      symbol_[i] = s;
      current_[i] = c;
      depth_[i + 1] = nd;
      placed = true;
      break;
    }
    if (!placed) return false;
  }
  return true;
}

std::optional<std::string> ProgramEnumerator::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    if (!descend(0)) {
      done_ = true;
      return std::nullopt;
    }
    return current_;
  }
  // Odometer: bump the rightmost position that has a larger admissible
  // symbol, then refill everything to its right minimally.
  for (std::size_t k = n_; k-- > 0;) {
    const int d = depth_[k];
    const std::size_t remaining = n_ - k - 1;
    for (int s = symbol_[k] + 1; s < static_cast<int>(kBfAlphabet.size()); ++s) {
      const char c = kBfAlphabet[s];
      const int nd = c == '[' ? d + 1 : c == ']' ? d - 1 : d;
      if (nd < 0 || static_cast<std::size_t>(nd) > remaining) continue;
      symbol_[k] = s;
      current_[k] = c;
      depth_[k + 1] = nd;
      if (descend(k + 1)) return current_;
    }
  }
  done_ = true;
  return std::nullopt;
}

std::vector<std::string> enumeratePrograms(std::size_t n) {
  std::vector<std::string> out;
  ProgramEnumerator e(n);
  while (auto s = e.next()) out.push_back(std::move(*s));
  return out;
}

std::vector<std::string> enumerateStrings(std::size_t n, std::string_view alphabet) {
  std::vector<std::string> out;
  if (alphabet.empty()) {
    if (n == 0) out.emplace_back();
    return out;
  }
  std::vector<std::size_t> digits(n, 0);
  std::string s(n, alphabet[0]);
  while (true) {
    out.push_back(s);
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++digits[k] < alphabet.size()) {
        s[k] = alphabet[digits[k]];
        break;
      }
      digits[k] = 0;
      s[k] = alphabet[0];
      if (k == 0) return out;
    }
    if (n == 0) return out;
  }
}

ShortlexCodec::ShortlexCodec(std::string alphabet) : alphabet_(std::move(alphabet)) {
  if (alphabet_.empty()) throw std::invalid_argument("shortlex alphabet must not be empty");
  std::fill(std::begin(rank_), std::end(rank_), -1);
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    auto& r = rank_[static_cast<unsigned char>(alphabet_[i])];
    if (r != -1) throw std::invalid_argument("shortlex alphabet has a repeated symbol");
    r = static_cast<int>(i);
  }
}

Natural ShortlexCodec::index(std::string_view s) const {
  const Natural k = alphabet_.size();
  // Strings shorter than s, then s's rank among strings of its length.
  Natural offset = 0;
  Natural power = 1;
  for (std::size_t len = 0; len < s.size(); ++len) {
    offset += power;
    power *= k;
  }
  Natural rank = 0;
  for (char c : s) {
    const int r = rank_[static_cast<unsigned char>(c)];
    if (r < 0) throw std::invalid_argument("symbol outside shortlex alphabet");
    rank = rank * k + r;
  }
  return offset + rank;
}

std::string ShortlexCodec::string(const Natural& index) const {
  const Natural k = alphabet_.size();
  Natural rest = index;
  Natural power = 1;
  std::size_t len = 0;
  while (rest >= power) {
    rest -= power;
    power *= k;
    ++len;
  }
  std::string s(len, alphabet_[0]);
  for (std::size_t i = len; i-- > 0;) {
    s[i] = alphabet_[static_cast<std::size_t>(rest % k)];
    rest /= k;
  }
  return s;
}

Natural shortlexIndex(std::string_view s) {
  static const ShortlexCodec codec;
  return codec.index(s);
}

std::string shortlexString(const Natural& index) {
  static const ShortlexCodec codec;
  return codec.string(index);
}

Natural cantorPair(const Natural& x, const Natural& y) {
  const Natural s = x + y;
  return x + s * (s + 1) / 2;
}

std::pair<Natural, Natural> cantorUnpair(const Natural& z) {
  // Largest w with w(w+1)/2 <= z.
  const Natural disc = 8 * z + 1;
  const Natural w = (mp::sqrt(disc) - 1) / 2;
  const Natural t = w * (w + 1) / 2;
  const Natural x = z - t;
  return {x, w - x};
}

}  // namespace halt_lab
