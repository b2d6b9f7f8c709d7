#include "modbanach/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "modbanach/error.hpp"

namespace modbanach {

JsonReader JsonReader::child(const std::string& key) const {
  if (!has(key)) fail(key, "is required");
  return JsonReader(node_.at(key), at(key));
}

JsonReader JsonReader::element(std::size_t i) const {
  return JsonReader(node_.at(i), path_ + "[" + std::to_string(i) + "]");
}

void JsonReader::fail(const std::string& key, const std::string& what) const {
  throw ConfigError((key.empty() ? path_ : at(key)) + ": " + what);
}

double JsonReader::number(const std::string& key) const {
  if (!has(key)) fail(key, "is required (a number)");
  return number_from_json(node_.at(key), at(key));
}

double JsonReader::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::size_t JsonReader::count(const std::string& key) const {
  if (!has(key)) fail(key, "is required (a non-negative integer)");
  const Json& v = node_.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0 && !v.is_number_unsigned()))
    fail(key, "must be a non-negative integer, got " + v.dump());
  return v.get<std::size_t>();
}

std::size_t JsonReader::count(const std::string& key, std::size_t fallback) const {
  return has(key) ? count(key) : fallback;
}

std::uint64_t JsonReader::u64(const std::string& key) const {
  if (!has(key)) fail(key, "is required (an unsigned 64-bit integer)");
  const Json& v = node_.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    fail(key, "must be an unsigned 64-bit integer, got " + v.dump());
  return v.get<std::uint64_t>();
}

std::string JsonReader::text(const std::string& key) const {
  if (!has(key)) fail(key, "is required (a string)");
  const Json& v = node_.at(key);
  if (!v.is_string()) fail(key, "must be a string, got " + v.dump());
  return v.get<std::string>();
}

std::string JsonReader::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

bool JsonReader::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Json& v = node_.at(key);
  if (!v.is_boolean()) fail(key, "must be true or false, got " + v.dump());
  return v.get<bool>();
}

std::vector<double> JsonReader::numbers(const std::string& key) const {
  if (!has(key)) fail(key, "is required (an array of numbers)");
  const Json& v = node_.at(key);
  if (!v.is_array()) fail(key, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(number_from_json(v[i], at(key) + "[" + std::to_string(i) + "]"));
  return out;
}

Json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
  }
  throw ConfigError(path + ": expected a number (or \"inf\"), got " + j.dump());
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

Json numbers(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(json_number(x));
  return a;
}

template <typename T>
Json index_array(const std::vector<T>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x);
  return a;
}

// Library precondition failures surface as ConfigError with the path.
template <typename F>
auto at_path(const std::string& path, F&& make) {
  try {
    return make();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace

Json to_json(const Vector& x) {
  if (!x.is_complex()) return numbers(x.real());
  return Json{{"re", numbers(x.real())}, {"im", numbers(x.imag())}};
}

Vector vector_from_json(const Json& j, const std::string& path) {
  auto read = [&](const Json& a, const std::string& p) {
    if (!a.is_array()) throw ConfigError(p + ": expected an array of numbers");
    std::vector<double> v;
    for (std::size_t i = 0; i < a.size(); ++i) v.push_back(number_from_json(a[i], p + "[" + std::to_string(i) + "]"));
    return v;
  };
  if (j.is_object()) {
    JsonReader r(j, path);
    auto re = read(r.child("re").node(), r.at("re"));
    auto im = read(r.child("im").node(), r.at("im"));
    return at_path(path, [&] { return Vector(std::move(re), std::move(im)); });
  }
  return Vector(read(j, path));
}

Json to_json(const FiniteNormedSpace& space) {
  return std::visit(
      [](const auto& k) -> Json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LpKind>)
          return Json{{"kind", "lp"}, {"params", {{"p", json_number(k.p)}, {"d", k.d}}}};
        else if constexpr (std::is_same_v<K, SchattenKind>)
          return Json{{"kind", "schatten"}, {"params", {{"p", json_number(k.p)}, {"side", k.side}}}};
        else if constexpr (std::is_same_v<K, EuclidKind>)
          return Json{{"kind", "euclid"}, {"params", {{"d", k.d}}}};
        else if constexpr (std::is_same_v<K, TwoSumKind>) {
          Json parts = Json::array();
          for (const auto& p : k.parts) parts.push_back(to_json(p));
          return Json{{"kind", "two_sum"}, {"params", {{"parts", parts}}}};
        } else
          return Json{{"kind", "custom"}, {"params", {{"d", k.d}, {"label", k.label}}}};
      },
      space.kind());
}

FiniteNormedSpace space_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected a space object {\"kind\", \"params\"}");
  JsonReader r(j, path);
  const auto kind = r.text("kind");
  const JsonReader params = r.child("params");
  return at_path(path, [&] {
    if (kind == "lp") return FiniteNormedSpace::lp(params.number("p"), params.count("d"));
    if (kind == "schatten") return FiniteNormedSpace::schatten(params.number("p"), params.count("side"));
    if (kind == "euclid") return FiniteNormedSpace::euclid(params.count("d"));
    if (kind == "two_sum") {
      const JsonReader parts = params.child("parts");
      if (!parts.node().is_array() || parts.node().empty()) parts.fail("", "must be a non-empty array of spaces");
      std::vector<FiniteNormedSpace> spaces;
      for (std::size_t i = 0; i < parts.node().size(); ++i)
        spaces.push_back(space_from_json(parts.node()[i], parts.element(i).path()));
      return FiniteNormedSpace::two_sum(std::move(spaces));
    }
    r.fail("kind", "unknown space kind \"" + kind + "\" (expected lp, schatten, euclid or two_sum)");
  });
}

Json to_json(const ExponentSequence& e) {
  return std::visit(
      [](const auto& k) -> Json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ExponentSequence::Constant>)
          return Json{{"kind", "constant"}, {"params", {{"p", json_number(k.p)}}}};
        else if constexpr (std::is_same_v<K, ExponentSequence::Explicit>)
          return Json{{"kind", "list"}, {"params", {{"values", numbers(k.values)}}}};
        else {
          switch (k.family) {
            case ExponentSequence::Family::power:
              return Json{{"kind", "power"}, {"params", {{"a", k.a}, {"s", k.s}}}};
            case ExponentSequence::Family::log:
              return Json{{"kind", "log"}, {"params", {{"a", k.a}, {"b", k.b}}}};
            case ExponentSequence::Family::loglog:
              return Json{{"kind", "loglog"}, {"params", {{"a", k.a}, {"b", k.b}}}};
          }
          return Json{};
        }
      },
      e.kind());
}

ExponentSequence exponents_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an exponent sequence {\"kind\", \"params\"}");
  JsonReader r(j, path);
  const auto kind = r.text("kind");
  const JsonReader params = r.child("params");
  return at_path(path, [&] {
    if (kind == "constant") return ExponentSequence::constant(params.number("p"));
    if (kind == "list") return ExponentSequence::list(params.numbers("values"));
    if (kind == "power") return ExponentSequence::power(params.number("a"), params.number("s", 1.0));
    if (kind == "log") return ExponentSequence::log(params.number("a"), params.number("b", 1.0));
    if (kind == "loglog") return ExponentSequence::loglog(params.number("a"), params.number("b", 3.0));
    r.fail("kind", "unknown exponent kind \"" + kind + "\" (expected constant, list, power, log or loglog)");
  });
}

Json to_json(const BlockSequence& b) {
  return std::visit(
      [&](const auto& k) -> Json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, BlockSequence::Uniform>) {
          if (b.is_scalar()) return Json{{"kind", "scalar"}, {"params", Json::object()}};
          return Json{{"kind", "uniform"}, {"params", {{"space", to_json(k.space)}}}};
        } else if constexpr (std::is_same_v<K, BlockSequence::List>) {
          Json a = Json::array();
          for (const auto& s : k.spaces) a.push_back(to_json(s));
          return Json{{"kind", "list"}, {"params", {{"spaces", a}}}};
        } else if constexpr (std::is_same_v<K, BlockSequence::MatchingLp>)
          return Json{{"kind", "matching_lp"}, {"params", {{"d", k.d}}}};
        else
          return Json{{"kind", "matching_schatten"}, {"params", {{"side", k.side}}}};
      },
      b.kind());
}

BlockSequence blocks_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected a block sequence {\"kind\", \"params\"}");
  JsonReader r(j, path);
  const auto kind = r.text("kind");
  if (kind == "scalar") return BlockSequence::scalar();
  const JsonReader params = r.child("params");
  return at_path(path, [&] {
    if (kind == "uniform") return BlockSequence::uniform(space_from_json(params.child("space").node(), params.at("space")));
    if (kind == "list") {
      const JsonReader list = params.child("spaces");
      if (!list.node().is_array() || list.node().empty()) list.fail("", "must be a non-empty array of spaces");
      std::vector<FiniteNormedSpace> spaces;
      for (std::size_t i = 0; i < list.node().size(); ++i)
        spaces.push_back(space_from_json(list.node()[i], list.element(i).path()));
      return BlockSequence::list(std::move(spaces));
    }
    if (kind == "matching_lp") return BlockSequence::matching_lp(params.count("d"));
    if (kind == "matching_schatten") return BlockSequence::matching_schatten(params.count("side"));
    r.fail("kind", "unknown block kind \"" + kind +
                       "\" (expected scalar, uniform, list, matching_lp or matching_schatten)");
  });
}

Json to_json(const NakanoSpec& spec) {
  Json j = to_json(spec.exponents);
  j["blocks"] = to_json(spec.blocks);
  return j;
}

NakanoSpec spec_from_json(const Json& j, const std::string& path) {
  JsonReader r(j, path);
  auto exponents = exponents_from_json(j, path);
  auto blocks = r.has("blocks") ? blocks_from_json(j.at("blocks"), r.at("blocks")) : BlockSequence::scalar();
  return NakanoSpec{std::move(exponents), std::move(blocks)};
}

Json to_json(const ConvexModular& theta) {
  return std::visit(
      [](const auto& k) -> Json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ConvexModular::Power>)
          return Json{{"kind", "power"}, {"params", {{"space", to_json(k.space)}, {"q", json_number(k.q)}}}};
        else if constexpr (std::is_same_v<K, ConvexModular::DirectSum>) {
          Json parts = Json::array();
          for (const auto& p : k.parts) parts.push_back(to_json(p));
          return Json{{"kind", "direct_sum"}, {"params", {{"parts", parts}}}};
        } else
          return Json{{"kind", "nakano"}, {"params", {{"spec", to_json(k.spec)}}}};
      },
      theta.kind());
}

ConvexModular modular_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected a modular {\"kind\", \"params\"}");
  JsonReader r(j, path);
  const auto kind = r.text("kind");
  const JsonReader params = r.child("params");
  return at_path(path, [&] {
    if (kind == "power" || kind == "square") {
      auto space = space_from_json(params.child("space").node(), params.at("space"));
      return ConvexModular::power(std::move(space), kind == "square" ? 2.0 : params.number("q"));
    }
    if (kind == "direct_sum") {
      const JsonReader parts = params.child("parts");
      if (!parts.node().is_array()) parts.fail("", "must be an array of modulars");
      std::vector<ConvexModular> out;
      for (std::size_t i = 0; i < parts.node().size(); ++i)
        out.push_back(modular_from_json(parts.node()[i], parts.element(i).path()));
      return ConvexModular::direct_sum(std::move(out));
    }
    if (kind == "nakano") return ConvexModular::nakano(spec_from_json(params.child("spec").node(), params.at("spec")));
    r.fail("kind", "unknown modular kind \"" + kind + "\" (expected power, square, direct_sum or nakano)");
  });
}

Json to_json(const BlockVector& x) {
  Json a = Json::array();
  for (const auto& [n, v] : x.entries()) a.push_back(Json{{"n", n}, {"x", to_json(v)}});
  return a;
}

BlockVector block_vector_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array of {\"n\", \"x\"} blocks");
  std::vector<BlockVector::Entry> entries;
  for (std::size_t i = 0; i < j.size(); ++i) {
    JsonReader e(j[i], path + "[" + std::to_string(i) + "]");
    const std::size_t n = e.count("n");
    entries.emplace_back(n, vector_from_json(e.child("x").node(), e.at("x")));
  }
  return at_path(path, [&] { return BlockVector(std::move(entries)); });
}

Json to_json(const ViolationReport& r) {
  Json witness = Json::array();
  for (const auto& v : r.worst_witness) witness.push_back(to_json(v));
  return Json{{"check", r.check},
              {"space", r.space},
              {"samples", r.samples},
              {"max_violation", json_number(r.max_violation)},
              {"tolerance", json_number(r.tolerance)},
              {"seed", r.seed},
              {"verdict", to_string(r.verdict)},
              {"worst_witness", witness},
              {"witness_scalars", numbers(r.witness_scalars)}};
}

Json to_json(const JvnEstimate& e) {
  return Json{{"lower_bound", json_number(e.lower_bound)},
              {"witness", {{"x", to_json(e.witness.x)}, {"y", to_json(e.witness.y)}}},
              {"starts", e.starts},
              {"ascent_steps", e.ascent_steps},
              {"evaluations", e.evaluations},
              {"seed", e.seed}};
}

Json to_json(const AsymptoticsReport& r) {
  Json j{{"exponents", numbers(r.exponents)},
         {"jvn", numbers(r.jvn)},
         {"alpha", numbers(r.alpha)},
         {"beta", numbers(r.beta)}};
  j["tail_bound"] = r.tail_bound ? json_number(*r.tail_bound) : Json(nullptr);
  return j;
}

Json to_json(const TailParallelogramReport& r) {
  return Json{{"max_ratio", json_number(r.max_ratio)},
              {"beta", json_number(r.beta)},
              {"samples", r.samples},
              {"worst_x", to_json(r.worst_x)},
              {"worst_y", to_json(r.worst_y)}};
}

Json to_json(const NakanoTerms& t) {
  return Json{{"c", json_number(t.c)},
              {"index", index_array(t.index)},
              {"term", numbers(t.term)},
              {"log_term", numbers(t.log_term)},
              {"log_slope", numbers(t.log_slope)}};
}

Json to_json(const NakanoConditionResult& r) {
  Json per = Json::array();
  for (const auto& c : r.per_c)
    per.push_back(Json{{"c", json_number(c.c)},
                       {"fitted_slope", json_number(c.fitted_slope)},
                       {"verdict", to_string(c.verdict)}});
  return Json{{"per_c", per}, {"overall", r.some_c_converges ? "some c converges" : "none in grid"}};
}

Json to_json(const IterationTrace& t) {
  return Json{{"norms", numbers(t.norms)},
              {"residuals", numbers(t.residuals)},
              {"telescoping_defects", numbers(t.telescoping_defects)}};
}

Json to_json(const SummandSearch& s) {
  Json j{{"found", s.candidate.has_value()}, {"residual", json_number(s.residual)}, {"starts", s.starts}};
  if (s.candidate) j["candidate"] = Json{{"xi", to_json(s.candidate->xi)}, {"phi", numbers(s.candidate->phi)}};
  return j;
}

Json to_json(const LimitIsometryReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples)
    samples.push_back(Json{{"norm", json_number(s.norm)},
                           {"limit_norm", json_number(s.limit_norm)},
                           {"cauchy_gap", json_number(s.cauchy_gap)},
                           {"status", to_string(s.status)}});
  Json j{{"samples", samples}, {"all_pass", r.all_pass}, {"summand_found", r.summand_found}};
  j["pt_vs_t_deviation"] = r.pt_vs_t_deviation ? json_number(*r.pt_vs_t_deviation) : Json(nullptr);
  j["pt_equals_t"] = r.pt_equals_t;
  return j;
}

Json to_json(const RangeIntersection& r) {
  return Json{{"dim", r.dim}, {"ambiguous", r.ambiguous}, {"cosines", numbers(r.cosines)}};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string CsvTable::render() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_field(header[i]);
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  return out.str();
}

std::string violation_csv(const std::vector<ViolationReport>& reports) {
  std::ostringstream out;
  out << "check,space,samples,max_violation,tolerance,seed,verdict\n";
  for (const auto& r : reports)
    out << csv_field(r.check) << "," << csv_field(r.space) << "," << r.samples << "," << format_double(r.max_violation)
        << "," << format_double(r.tolerance) << "," << r.seed << "," << to_string(r.verdict) << "\n";
  return out.str();
}

}  // namespace modbanach
