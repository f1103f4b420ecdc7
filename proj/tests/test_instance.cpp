#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polyreg/instance.hpp"
#include "polyreg/set_calculus.hpp"

using namespace polyreg;

namespace {

const char* kRightAngle = R"({
  "space_dim": 2,
  "norm": {"kind": "linf", "mode": "exact"},
  "sets": [
    {"type": "hpoly", "rows": [{"a": ["1", "0"], "b": "0"}]},
    {"type": "hpoly", "rows": [{"a": ["0", "1"], "b": "0"}]}
  ],
  "points_of_interest": [["0", "0"]],
  "seed": 7,
  "samples": 500
})";

std::string parse_error_of(const std::string& text) {
  try {
    parse_instance_text(text, "t");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("a full instance file parses into collection and params") {
  Instance inst = parse_instance_text(kRightAngle, "right_angle");
  CHECK(inst.name == "right_angle");
  CHECK(inst.collection.dim == 2);
  CHECK(inst.collection.norm.kind == NormKind::Linf);
  CHECK(inst.collection.norm.mode == EvalMode::Exact);
  CHECK(inst.collection.norm.tol == Rat(1, 1000000));  // default
  REQUIRE(inst.collection.sets.size() == 2);
  const auto& h0 = std::get<HPolyhedron>(inst.collection.sets[0]);
  REQUIRE(h0.rows.size() == 1);
  CHECK(h0.rows[0].a == RatVec{Rat(1), Rat(0)});
  CHECK(h0.rows[0].b == Rat(0));
  CHECK_FALSE(h0.rows[0].eq);
  REQUIRE(inst.params.points_of_interest.size() == 1);
  CHECK(inst.params.points_of_interest[0] == RatVec{Rat(0), Rat(0)});
  CHECK(inst.params.seed == 7);
  CHECK(inst.params.samples == 500);
}

TEST_CASE("defaults: seed 1, samples 10000, empty points") {
  Instance inst = parse_instance_text(R"({
    "space_dim": 1,
    "norm": {"kind": "linf", "mode": "exact"},
    "sets": [{"type": "hpoly", "rows": []}]
  })",
                                      "t");
  CHECK(inst.params.seed == 1);
  CHECK(inst.params.samples == 10000);
  CHECK(inst.params.points_of_interest.empty());
}

TEST_CASE("bad rational names the field and the line") {
  const std::string text = R"({
  "space_dim": 2,
  "norm": {"kind": "linf", "mode": "exact"},
  "sets": [
    {"type": "hpoly", "rows": [{"a": ["1", "1/0"], "b": "0"}]}
  ]
})";
  const std::string msg = parse_error_of(text);
  CHECK(msg.find("field sets[0].rows[0].a[1]") != std::string::npos);
  CHECK(msg.substr(0, 4) == "t:5:");  // the line holding "1/0"
}

TEST_CASE("mixed dimensions are a validation error") {
  const std::string text = R"({
  "space_dim": 2,
  "norm": {"kind": "linf", "mode": "exact"},
  "sets": [
    {"type": "hpoly", "rows": [{"a": ["1", "0", "0"], "b": "0"}]}
  ]
})";
  const std::string msg = parse_error_of(text);
  CHECK(msg.find("sets[0].rows[0].a") != std::string::npos);
  CHECK(msg.find("expected 2 entries, got 3") != std::string::npos);
}

TEST_CASE("unknown keys and unknown types are rejected") {
  CHECK(parse_error_of(R"({"space_dim": 1, "norm": {"kind": "linf",
    "mode": "exact"}, "sets": [{"type": "hpoly", "rows": []}],
    "extra": 1})")
            .find("field <document>.extra: unknown field") !=
        std::string::npos);
  CHECK(parse_error_of(R"({"space_dim": 1, "norm": {"kind": "linf",
    "mode": "exact"}, "sets": [{"type": "simplex"}]})")
            .find("expected one of hpoly, ball, cone, shrinking_intervals") !=
        std::string::npos);
  CHECK(parse_error_of(R"({"space_dim": 1, "norm": {"kind": "l3",
    "mode": "exact"}, "sets": [{"type": "hpoly", "rows": []}]})")
            .find("field norm.kind: expected one of l1, l2, linf") !=
        std::string::npos);
  CHECK(parse_error_of("{ nope }").find("not parseable as JSON") !=
        std::string::npos);
}

TEST_CASE("ball descriptors lower to H-form under polyhedral norms") {
  Instance inst = parse_instance_text(R"({
    "space_dim": 2,
    "norm": {"kind": "linf", "mode": "exact"},
    "sets": [{"type": "ball", "center": ["0", "1"], "radius": "1"}]
  })",
                                      "t");
  const auto* h = std::get_if<HPolyhedron>(&inst.collection.sets[0]);
  REQUIRE(h != nullptr);
  CHECK(h->rows.size() == 4);  // the square [-1,1] x [0,2]
  CHECK(set_contains(inst.collection.sets[0], {Rat(1), Rat(2)}));
  CHECK_FALSE(set_contains(inst.collection.sets[0], {Rat(1), Rat(-1, 2)}));
}

TEST_CASE("ball descriptors stay analytic under l2") {
  Instance inst = parse_instance_text(R"({
    "space_dim": 2,
    "norm": {"kind": "l2", "mode": "float"},
    "sets": [
      {"type": "ball", "center": ["0", "1"], "radius": "1"},
      {"type": "hpoly", "rows": [{"a": ["0", "1"], "b": "0"}]}
    ],
    "intersection_override": {"type": "hpoly", "rows": [
      {"a": ["1", "0"], "b": "0", "eq": true},
      {"a": ["0", "1"], "b": "0", "eq": true}
    ]}
  })",
                                      "t");
  const auto* b = std::get_if<Ball>(&inst.collection.sets[0]);
  REQUIRE(b != nullptr);
  CHECK(b->center == RatVec{Rat(0), Rat(1)});
  CHECK(b->radius == Rat(1));
}

TEST_CASE("a ball without an override is rejected by validation") {
  CHECK_THROWS_AS(parse_instance_text(R"({
    "space_dim": 2,
    "norm": {"kind": "l2", "mode": "float"},
    "sets": [{"type": "ball", "center": ["0", "1"], "radius": "1"}]
  })",
                                      "t"),
                  DomainError);
}

TEST_CASE("cone and family descriptors parse") {
  Instance inst = parse_instance_text(R"({
    "space_dim": 2,
    "norm": {"kind": "linf", "mode": "exact"},
    "sets": [{"type": "cone", "generators": [["1", "0"], ["1", "1"]]}]
  })",
                                      "t");
  const auto* g = std::get_if<GeneratedCone>(&inst.collection.sets[0]);
  REQUIRE(g != nullptr);
  CHECK(g->rays.size() == 2);

  Instance fam = parse_instance_text(R"({
    "space_dim": 1,
    "norm": {"kind": "linf", "mode": "exact"},
    "sets": [{"type": "shrinking_intervals"}]
  })",
                                     "t");
  CHECK(is_family(fam.collection.sets[0]));
}

TEST_CASE("intersection override is canonicalized H-form") {
  Instance inst = parse_instance_text(R"({
    "space_dim": 2,
    "norm": {"kind": "l2", "mode": "float"},
    "sets": [
      {"type": "ball", "center": ["0", "1"], "radius": "1"},
      {"type": "hpoly", "rows": [{"a": ["0", "1"], "b": "0"}]}
    ],
    "intersection_override": {"type": "hpoly", "rows": [
      {"a": ["1", "0"], "b": "0", "eq": true},
      {"a": ["0", "1"], "b": "0", "eq": true}
    ]}
  })",
                                      "t");
  REQUIRE(inst.collection.override_intersection.has_value());
  CHECK(inst.collection.override_intersection->canonical);
}

TEST_CASE("empty intersection raises its own error") {
  CHECK_THROWS_AS(parse_instance_text(R"({
    "space_dim": 1,
    "norm": {"kind": "linf", "mode": "exact"},
    "sets": [
      {"type": "hpoly", "rows": [{"a": ["1"], "b": "-1"}]},
      {"type": "hpoly", "rows": [{"a": ["-1"], "b": "-1"}]}
    ]
  })",
                                      "t"),
                  EmptyIntersectionError);
}

TEST_CASE("negative radius and bad samples are rejected") {
  CHECK(parse_error_of(R"({"space_dim": 1, "norm": {"kind": "l1",
    "mode": "exact"}, "sets": [{"type": "ball", "center": ["0"],
    "radius": "-1"}]})")
            .find("radius: must be positive") != std::string::npos);
  CHECK(parse_error_of(R"({"space_dim": 1, "norm": {"kind": "linf",
    "mode": "exact"}, "sets": [{"type": "hpoly", "rows": []}],
    "samples": 0})")
            .find("field samples: expected a positive integer") !=
        std::string::npos);
}

TEST_CASE("round trip: parse, serialize, parse is identity") {
  Instance a = parse_instance_text(kRightAngle, "right_angle");
  const std::string text = serialize_instance(a);
  Instance b = parse_instance_text(text, "right_angle");
  CHECK(b.collection.dim == a.collection.dim);
  CHECK(b.collection.norm.kind == a.collection.norm.kind);
  CHECK(b.collection.norm.mode == a.collection.norm.mode);
  CHECK(b.collection.norm.tol == a.collection.norm.tol);
  REQUIRE(b.collection.sets.size() == a.collection.sets.size());
  for (std::size_t i = 0; i < a.collection.sets.size(); ++i)
    CHECK(set_equal(to_hform(a.collection.sets[i]),
                    to_hform(b.collection.sets[i])));
  CHECK(b.params.seed == a.params.seed);
  CHECK(b.params.samples == a.params.samples);
  CHECK(b.params.points_of_interest == a.params.points_of_interest);
  // and the serialization itself is a fixed point
  CHECK(serialize_instance(b) == text);
}

TEST_CASE("round trip preserves balls, cones, overrides") {
  Instance a = parse_instance_text(R"({
    "space_dim": 2,
    "norm": {"kind": "l2", "mode": "float", "tol": "1e-9"},
    "sets": [
      {"type": "ball", "center": ["0", "1"], "radius": "1"},
      {"type": "cone", "generators": [["1", "0"]]}
    ],
    "intersection_override": {"type": "hpoly", "rows": [
      {"a": ["1", "0"], "b": "0", "eq": true},
      {"a": ["0", "1"], "b": "0", "eq": true}
    ]}
  })",
                                   "t");
  Instance b = parse_instance_text(serialize_instance(a), "t");
  CHECK(std::get<Ball>(b.collection.sets[0]).center ==
        std::get<Ball>(a.collection.sets[0]).center);
  CHECK(std::get<GeneratedCone>(b.collection.sets[1]).rays ==
        std::get<GeneratedCone>(a.collection.sets[1]).rays);
  REQUIRE(b.collection.override_intersection.has_value());
  CHECK(set_equal(*b.collection.override_intersection,
                  *a.collection.override_intersection));
  CHECK(b.collection.norm.tol == Rat(1, 1000000000));
}

TEST_CASE("parse_instance reads from disk and stems the name") {
  const std::string path = "/tmp/polyreg_instance_demo.json";
  {
    std::ofstream out(path);
    out << kRightAngle;
  }
  Instance inst = parse_instance(path);
  CHECK(inst.name == "polyreg_instance_demo");
  CHECK_THROWS_AS(parse_instance("/tmp/definitely_missing_instance.json"),
                  ParseError);
}
