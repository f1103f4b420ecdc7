#include "polyreg/rational.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace polyreg {

namespace {

bool parse_int_text(const std::string& s, Int& out) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') i = 1;
  if (i == s.size()) return false;
  for (std::size_t k = i; k < s.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
  // GMP rejects a leading '+'.
  out = Int(s[0] == '+' ? s.substr(1) : s);
  return true;
}

}  // namespace

Rat parse_rat(const std::string& text) {
  const auto slash = text.find('/');
  Int num, den = 1;
  if (slash == std::string::npos) {
    if (!parse_int_text(text, num))
      throw ParseError("not a rational: \"" + text + "\"");
  } else {
    if (!parse_int_text(text.substr(0, slash), num) ||
        !parse_int_text(text.substr(slash + 1), den))
      throw ParseError("not a rational: \"" + text + "\"");
    if (den == 0) throw ParseError("zero denominator: \"" + text + "\"");
  }
  // Division canonicalizes (gcd-reduced, positive denominator); the GMP
  // string constructor does not, so it is never used on "p/q" input.
  return Rat(num) / Rat(den);
}

Rat parse_tolerance(const std::string& text) {
  if (text.find('e') == std::string::npos &&
      text.find('E') == std::string::npos &&
      text.find('.') == std::string::npos)
    return parse_rat(text);

  std::string mantissa = text;
  long exp10 = 0;
  auto epos = text.find_first_of("eE");
  if (epos != std::string::npos) {
    mantissa = text.substr(0, epos);
    const std::string etext = text.substr(epos + 1);
    Int e;
    if (!parse_int_text(etext, e) || abs(e) > 4096)
      throw ParseError("bad exponent: \"" + text + "\"");
    exp10 = static_cast<long>(e);
  }
  std::string digits = mantissa;
  long frac_digits = 0;
  auto dpos = mantissa.find('.');
  if (dpos != std::string::npos) {
    digits = mantissa.substr(0, dpos) + mantissa.substr(dpos + 1);
    frac_digits = static_cast<long>(mantissa.size() - dpos - 1);
    if (frac_digits == 0 || digits.empty() ||
        digits == "+" || digits == "-")
      throw ParseError("not a number: \"" + text + "\"");
  }
  Int num;
  if (!parse_int_text(digits, num))
    throw ParseError("not a number: \"" + text + "\"");
  const long e = exp10 - frac_digits;
  Int scale = pow(Int(10), static_cast<unsigned>(e < 0 ? -e : e));
  return e < 0 ? Rat(num) / Rat(scale) : Rat(num * scale);
}

std::string rat_to_string(const Rat& v) {
  const Int num = numerator(v), den = denominator(v);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double rat_to_double(const Rat& v) { return v.convert_to<double>(); }

std::string format_real(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                               std::chars_format::general, 12);
  assert(ec == std::errc());
  return std::string(buf, p);
}

Rat dot(const RatVec& a, const RatVec& b) {
  assert(a.size() == b.size());
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatVec vec_add(const RatVec& a, const RatVec& b) {
  assert(a.size() == b.size());
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RatVec vec_sub(const RatVec& a, const RatVec& b) {
  assert(a.size() == b.size());
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RatVec vec_scale(const Rat& s, const RatVec& a) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

RatVec vec_neg(const RatVec& a) { return vec_scale(Rat(-1), a); }

bool is_zero_vec(const RatVec& a) {
  return std::all_of(a.begin(), a.end(), [](const Rat& v) { return v == 0; });
}

RatVec zero_vec(int dim) { return RatVec(static_cast<std::size_t>(dim), Rat(0)); }

RatVec primitive_scale(const RatVec& v) {
  Int den_lcm = 1, num_gcd = 0;
  for (const Rat& x : v) den_lcm = lcm(den_lcm, denominator(x));
  for (const Rat& x : v) num_gcd = gcd(num_gcd, Int(numerator(x) * (den_lcm / denominator(x))));
  if (num_gcd == 0) return v;  // zero vector
  const Rat factor = Rat(den_lcm) / Rat(num_gcd);
  return vec_scale(factor, v);
}

void primitive_scale_row(RatVec& a, Rat& b) {
  RatVec joint = a;
  joint.push_back(b);
  joint = primitive_scale(joint);
  b = joint.back();
  joint.pop_back();
  a = std::move(joint);
}

Rat abs_rat(const Rat& v) { return v < 0 ? Rat(-v) : v; }
Rat max_rat(const Rat& a, const Rat& b) { return a < b ? b : a; }

Rat norm_l1(const RatVec& v) {
  Rat s = 0;
  for (const Rat& x : v) s += abs_rat(x);
  return s;
}

Rat norm_linf(const RatVec& v) {
  Rat s = 0;
  for (const Rat& x : v) s = max_rat(s, abs_rat(x));
  return s;
}

Rat norm_l2_sq(const RatVec& v) { return dot(v, v); }

}  // namespace polyreg
