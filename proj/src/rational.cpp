#include "ccn/rational.hpp"

#include <mutex>
#include <vector>

#include "ccn/errors.hpp"

namespace ccn {

BigInt factorial(unsigned n) {
  static std::mutex mu;
  static std::vector<BigInt> table{1};
  std::lock_guard lock(mu);
  while (table.size() <= n) table.push_back(table.back() * static_cast<unsigned>(table.size()));
  return table[n];
}

BigInt binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

std::string to_string(const BigInt& z) { return z.str(); }

std::string to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

BigInt parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw SpecError("bad rational '" + std::string(whole) + "'");
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw SpecError("bad rational '" + std::string(whole) + "'");
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw SpecError("bad rational '" + std::string(whole) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw SpecError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    std::string frac(text.substr(dot + 1));
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const bool neg = !digits.empty() && digits[0] == '-';
    BigInt ip = parse_integer(digits, text);
    BigInt fp = frac.empty() ? BigInt(0) : parse_integer(frac, text);
    if (fp < 0) throw SpecError("bad rational '" + std::string(text) + "'");
    BigInt num = (neg ? BigInt(-ip) : ip) * scale + fp;
    return Rational(neg ? BigInt(-num) : num, scale);
  }
  return Rational(parse_integer(text, text));
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace ccn
