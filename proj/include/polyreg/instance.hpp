#pragma once

#include <stdexcept>
#include <string>

#include "polyreg/convex_set.hpp"

namespace polyreg {

/// The intersection came back empty at load time. The CLI maps this to its
/// own exit code, distinct from parse and validation failures.
struct EmptyIntersectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunParams {
  uint64_t seed = 1;
  int samples = 10000;
  std::vector<RatVec> points_of_interest;
};

struct Instance {
  std::string name;  // file stem; the "instance" column of every CSV row
  Collection collection;
  RunParams params;
};

/// Parse and validate an instance file. All rationals arrive as "p/q" or
/// integer strings. Failures are ParseError carrying
/// "<name>:<line>: field <path>: <reason>" (the line is located by the
/// offending key or literal), DomainError / UnsupportedError from structural
/// validation, or EmptyIntersectionError.
Instance parse_instance(const std::string& path);
Instance parse_instance_text(const std::string& text, const std::string& name);

/// Inverse of parsing. Balls lowered to H-form at load time serialize as the
/// polyhedra they became, so parse(serialize(i)) rebuilds an identical
/// collection even though the bytes differ from the original file.
std::string serialize_instance(const Instance& inst);

}  // namespace polyreg
