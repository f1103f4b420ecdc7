#include "polyreg/instance.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "polyreg/lp.hpp"

namespace polyreg {

namespace {

using nlohmann::json;

struct Ctx {
  const std::string& text;
  const std::string& name;
};

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

// Line of the first occurrence of the quoted token. Instance files are small
// and hand-written, so the first hit is the right one in practice; the full
// field path in the message removes any remaining ambiguity.
int line_of_token(const std::string& text, const std::string& token) {
  const std::size_t pos = text.find('"' + token + '"');
  return pos == std::string::npos ? 1 : line_of_byte(text, pos);
}

[[noreturn]] void fail(const Ctx& ctx, const std::string& path,
                       const std::string& token, const std::string& reason) {
  throw ParseError(ctx.name + ":" +
                   std::to_string(line_of_token(ctx.text, token)) +
                   ": field " + path + ": " + reason);
}

std::string tail_key(const std::string& path) {
  std::size_t dot = path.find_last_of('.');
  std::string last = dot == std::string::npos ? path : path.substr(dot + 1);
  const std::size_t bracket = last.find('[');
  if (bracket != std::string::npos) last = last.substr(0, bracket);
  return last;
}

const json& need(const Ctx& ctx, const json& obj, const std::string& path,
                 const char* key) {
  if (!obj.is_object()) fail(ctx, path, tail_key(path), "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(ctx, path + "." + key, key, "missing");
  return *it;
}

void reject_unknown(const Ctx& ctx, const json& obj, const std::string& path,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(ctx, path + "." + key, key, "unknown field");
  }
}

Rat get_rat(const Ctx& ctx, const json& v, const std::string& path) {
  if (v.is_number_integer())
    return Rat(static_cast<long long>(v.get<long long>()));
  if (!v.is_string())
    fail(ctx, path, tail_key(path), "expected a rational string");
  const std::string s = v.get<std::string>();
  try {
    return parse_rat(s);
  } catch (const ParseError& e) {
    fail(ctx, path, s, e.what());
  }
}

RatVec get_vec(const Ctx& ctx, const json& v, const std::string& path,
               int dim) {
  if (!v.is_array()) fail(ctx, path, tail_key(path), "expected an array");
  if (dim >= 0 && static_cast<int>(v.size()) != dim)
    fail(ctx, path, tail_key(path),
         "expected " + std::to_string(dim) + " entries, got " +
             std::to_string(v.size()));
  RatVec out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(get_rat(ctx, v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

NormContext get_norm(const Ctx& ctx, const json& v) {
  NormContext nc;
  reject_unknown(ctx, v, "norm", {"kind", "mode", "tol"});
  const json& kind = need(ctx, v, "norm", "kind");
  if (!kind.is_string()) fail(ctx, "norm.kind", "kind", "expected a string");
  const std::string ks = kind.get<std::string>();
  if (ks == "l1")
    nc.kind = NormKind::L1;
  else if (ks == "l2")
    nc.kind = NormKind::L2;
  else if (ks == "linf")
    nc.kind = NormKind::Linf;
  else
    fail(ctx, "norm.kind", ks, "expected one of l1, l2, linf");

  const json& mode = need(ctx, v, "norm", "mode");
  if (!mode.is_string()) fail(ctx, "norm.mode", "mode", "expected a string");
  const std::string ms = mode.get<std::string>();
  if (ms == "exact")
    nc.mode = EvalMode::Exact;
  else if (ms == "float")
    nc.mode = EvalMode::Float;
  else
    fail(ctx, "norm.mode", ms, "expected exact or float");

  if (const auto it = v.find("tol"); it != v.end()) {
    if (!it->is_string()) fail(ctx, "norm.tol", "tol", "expected a string");
    const std::string ts = it->get<std::string>();
    try {
      nc.tol = parse_tolerance(ts);
    } catch (const ParseError& e) {
      fail(ctx, "norm.tol", ts, e.what());
    }
    if (nc.tol <= 0) fail(ctx, "norm.tol", ts, "must be positive");
  }
  return nc;
}

// A "ball" descriptor under a polyhedral norm means the norm's own ball,
// which is a polyhedron; it is lowered to H-form here, once, so that the
// rest of the code never sees it. Under l2 it stays the analytic Ball.
ConvexSet get_set(const Ctx& ctx, const json& v, const std::string& path,
                  int dim, const NormContext& nc) {
  const json& type = need(ctx, v, path, "type");
  if (!type.is_string())
    fail(ctx, path + ".type", "type", "expected a string");
  const std::string ts = type.get<std::string>();

  if (ts == "hpoly") {
    reject_unknown(ctx, v, path, {"type", "rows"});
    const json& rows = need(ctx, v, path, "rows");
    if (!rows.is_array())
      fail(ctx, path + ".rows", "rows", "expected an array");
    std::vector<HRow> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string rp = path + ".rows[" + std::to_string(i) + "]";
      const json& row = rows[i];
      if (!row.is_object()) fail(ctx, rp, "rows", "expected an object");
      reject_unknown(ctx, row, rp, {"a", "b", "eq"});
      HRow hr;
      hr.a = get_vec(ctx, need(ctx, row, rp, "a"), rp + ".a", dim);
      hr.b = get_rat(ctx, need(ctx, row, rp, "b"), rp + ".b");
      hr.eq = false;
      if (const auto it = row.find("eq"); it != row.end()) {
        if (!it->is_boolean()) fail(ctx, rp + ".eq", "eq", "expected a bool");
        hr.eq = it->get<bool>();
      }
      out.push_back(std::move(hr));
    }
    return make_hpoly(dim, std::move(out));
  }
  if (ts == "ball") {
    reject_unknown(ctx, v, path, {"type", "center", "radius"});
    RatVec center =
        get_vec(ctx, need(ctx, v, path, "center"), path + ".center", dim);
    Rat radius = get_rat(ctx, need(ctx, v, path, "radius"), path + ".radius");
    if (radius <= 0)
      fail(ctx, path + ".radius", "radius", "must be positive");
    if (nc.kind == NormKind::L2) return Ball{std::move(center), radius};
    HPolyhedron h = ball_hpoly(nc.kind, dim, radius);
    for (auto& row : h.rows) row.b += dot(row.a, center);
    h.canonical = false;
    return canonicalized(h);
  }
  if (ts == "cone") {
    reject_unknown(ctx, v, path, {"type", "generators"});
    const json& gens = need(ctx, v, path, "generators");
    if (!gens.is_array())
      fail(ctx, path + ".generators", "generators", "expected an array");
    GeneratedCone cone;
    cone.dim = dim;
    for (std::size_t i = 0; i < gens.size(); ++i)
      cone.rays.push_back(get_vec(
          ctx, gens[i], path + ".generators[" + std::to_string(i) + "]", dim));
    return cone;
  }
  if (ts == "shrinking_intervals") {
    reject_unknown(ctx, v, path, {"type"});
    return ShrinkingIntervalFamily{};
  }
  fail(ctx, path + ".type", ts,
       "expected one of hpoly, ball, cone, shrinking_intervals");
}

uint64_t get_seed(const Ctx& ctx, const json& v) {
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0)
    return static_cast<uint64_t>(v.get<long long>());
  fail(ctx, "seed", "seed", "expected a nonnegative integer");
}

}  // namespace

Instance parse_instance_text(const std::string& text,
                             const std::string& name) {
  const Ctx ctx{text, name};
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(name + ":" + std::to_string(line_of_byte(text, e.byte)) +
                     ": field <document>: not parseable as JSON");
  }
  if (!j.is_object()) fail(ctx, "<document>", "space_dim", "expected an object");
  reject_unknown(ctx, j, "<document>",
                 {"space_dim", "norm", "sets", "points_of_interest",
                  "intersection_override", "seed", "samples"});

  Instance inst;
  inst.name = name;

  const json& dim_j = need(ctx, j, "<document>", "space_dim");
  if (!dim_j.is_number_integer() || dim_j.get<long long>() <= 0 ||
      dim_j.get<long long>() > 16)
    fail(ctx, "space_dim", "space_dim", "expected a small positive integer");
  const int dim = dim_j.get<int>();
  inst.collection.dim = dim;

  inst.collection.norm = get_norm(ctx, need(ctx, j, "<document>", "norm"));

  const json& sets = need(ctx, j, "<document>", "sets");
  if (!sets.is_array() || sets.empty())
    fail(ctx, "sets", "sets", "expected a nonempty array");
  for (std::size_t i = 0; i < sets.size(); ++i)
    inst.collection.sets.push_back(
        get_set(ctx, sets[i], "sets[" + std::to_string(i) + "]", dim,
                inst.collection.norm));

  if (const auto it = j.find("intersection_override"); it != j.end()) {
    ConvexSet o = get_set(ctx, *it, "intersection_override", dim,
                          inst.collection.norm);
    if (!is_polyhedral(o))
      fail(ctx, "intersection_override", "intersection_override",
           "must be polyhedral (hpoly or cone)");
    inst.collection.override_intersection = canonicalized(to_hform(o));
  }

  if (const auto it = j.find("points_of_interest"); it != j.end()) {
    if (!it->is_array())
      fail(ctx, "points_of_interest", "points_of_interest",
           "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i)
      inst.params.points_of_interest.push_back(
          get_vec(ctx, (*it)[i],
                  "points_of_interest[" + std::to_string(i) + "]", dim));
  }

  if (const auto it = j.find("seed"); it != j.end())
    inst.params.seed = get_seed(ctx, *it);
  if (const auto it = j.find("samples"); it != j.end()) {
    if (!it->is_number_integer() || it->get<long long>() <= 0)
      fail(ctx, "samples", "samples", "expected a positive integer");
    inst.params.samples = it->get<int>();
  }

  validate_collection(inst.collection);
  const HPolyhedron ih = intersection_hform(inst.collection);
  if (ih.known_empty || !is_feasible(ih))
    throw EmptyIntersectionError(name + ": the sets have empty intersection");
  return inst;
}

Instance parse_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError(path + ":1: field <document>: cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance_text(buf.str(),
                             std::filesystem::path(path).stem().string());
}

namespace {

json rat_json(const Rat& v) { return json(rat_to_string(v)); }

json vec_json(const RatVec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(rat_json(x));
  return out;
}

json hpoly_json(const HPolyhedron& h) {
  json rows = json::array();
  for (const auto& r : h.rows) {
    json row;
    row["a"] = vec_json(r.a);
    row["b"] = rat_json(r.b);
    row["eq"] = r.eq;
    rows.push_back(std::move(row));
  }
  return json{{"type", "hpoly"}, {"rows", std::move(rows)}};
}

json set_json(const ConvexSet& s) {
  if (const auto* b = std::get_if<Ball>(&s))
    return json{{"type", "ball"},
                {"center", vec_json(b->center)},
                {"radius", rat_json(b->radius)}};
  if (const auto* g = std::get_if<GeneratedCone>(&s)) {
    json gens = json::array();
    for (const auto& r : g->rays) gens.push_back(vec_json(r));
    return json{{"type", "cone"}, {"generators", std::move(gens)}};
  }
  if (is_family(s)) return json{{"type", "shrinking_intervals"}};
  // H-form covers both remaining payloads; V-polyhedra have no descriptor of
  // their own and round-trip through their H-form
  return hpoly_json(to_hform(s));
}

}  // namespace

std::string serialize_instance(const Instance& inst) {
  json j;
  j["space_dim"] = inst.collection.dim;
  j["norm"] = {{"kind", norm_kind_name(inst.collection.norm.kind)},
               {"mode", inst.collection.norm.mode == EvalMode::Exact
                            ? "exact"
                            : "float"},
               {"tol", rat_to_string(inst.collection.norm.tol)}};
  json sets = json::array();
  for (const auto& s : inst.collection.sets) sets.push_back(set_json(s));
  j["sets"] = std::move(sets);
  if (inst.collection.override_intersection)
    j["intersection_override"] =
        hpoly_json(*inst.collection.override_intersection);
  if (!inst.params.points_of_interest.empty()) {
    json pts = json::array();
    for (const auto& p : inst.params.points_of_interest)
      pts.push_back(vec_json(p));
    j["points_of_interest"] = std::move(pts);
  }
  j["seed"] = inst.params.seed;
  j["samples"] = inst.params.samples;
  return j.dump(2) + "\n";
}

}  // namespace polyreg
