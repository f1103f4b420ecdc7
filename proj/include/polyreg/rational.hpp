#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyreg {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;
using RatVec = std::vector<Rat>;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// A well-formed request outside what this build can answer (for example an
/// exact-mode computation that needs a polyhedral unit ball under l2).
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse "p", "-p" or "p/q". The result is always in lowest terms with a
/// positive denominator; a zero denominator is rejected here instead of being
/// handed to GMP (whose string constructor would silently accept it).
Rat parse_rat(const std::string& text);

/// Tolerances in instance files are written the way humans write them
/// ("1e-6", "0.05"); accepted alongside plain rationals. Always exact.
Rat parse_tolerance(const std::string& text);

std::string rat_to_string(const Rat& v);  // "p" or "p/q"
double rat_to_double(const Rat& v);

/// Shortest-of-12-significant-digits formatting via std::to_chars, so report
/// bytes do not depend on the global locale.
std::string format_real(double v);

// -- small dense vector helpers -------------------------------------------

Rat dot(const RatVec& a, const RatVec& b);
RatVec vec_add(const RatVec& a, const RatVec& b);
RatVec vec_sub(const RatVec& a, const RatVec& b);
RatVec vec_scale(const Rat& s, const RatVec& a);
RatVec vec_neg(const RatVec& a);
bool is_zero_vec(const RatVec& a);
RatVec zero_vec(int dim);

/// Multiply by the unique positive rational that makes every entry an integer
/// with overall gcd 1. Zero vectors are returned unchanged.
RatVec primitive_scale(const RatVec& v);

/// primitive_scale applied to (a | b) jointly, used for polyhedron rows.
void primitive_scale_row(RatVec& a, Rat& b);

Rat abs_rat(const Rat& v);
Rat max_rat(const Rat& a, const Rat& b);

/// l1 / l2-squared / linf of a rational vector, all exact.
Rat norm_l1(const RatVec& v);
Rat norm_linf(const RatVec& v);
Rat norm_l2_sq(const RatVec& v);

}  // namespace polyreg
