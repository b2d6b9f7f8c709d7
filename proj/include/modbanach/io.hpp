#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "modbanach/exponents.hpp"
#include "modbanach/geomconst.hpp"
#include "modbanach/isolab.hpp"
#include "modbanach/modular.hpp"
#include "modbanach/nakano.hpp"
#include "modbanach/spaces.hpp"
#include "modbanach/verify.hpp"

namespace modbanach {

// Insertion-ordered, so that dumps are stable and follow construction order.
using Json = nlohmann::ordered_json;

// Field access with path-carrying ConfigError messages.
class JsonReader {
 public:
  JsonReader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const Json& node() const { return node_; }
  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return path_ + "." + key; }

  bool has(const std::string& key) const { return node_.is_object() && node_.contains(key); }
  JsonReader child(const std::string& key) const;
  JsonReader element(std::size_t i) const;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  std::size_t count(const std::string& key) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  std::uint64_t u64(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;

  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

 private:
  const Json& node_;
  std::string path_;
};

// Numbers with "inf", "-inf" and "nan" spelled as strings.
Json json_number(double v);
double number_from_json(const Json& j, const std::string& path);

// 17 significant digits, "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double v);

Json to_json(const Vector& x);
Vector vector_from_json(const Json& j, const std::string& path);

// {"kind": "lp"|"schatten"|"euclid"|"two_sum", "params": {...}}
Json to_json(const FiniteNormedSpace& space);
FiniteNormedSpace space_from_json(const Json& j, const std::string& path);

// {"kind": "constant"|"list"|"power"|"log"|"loglog", "params": {...}}
Json to_json(const ExponentSequence& e);
ExponentSequence exponents_from_json(const Json& j, const std::string& path);

// {"kind": "scalar"|"uniform"|"list"|"matching_lp"|"matching_schatten", "params": {...}}
Json to_json(const BlockSequence& b);
BlockSequence blocks_from_json(const Json& j, const std::string& path);

// {"kind", "params"} of the exponent sequence plus "blocks".
Json to_json(const NakanoSpec& spec);
NakanoSpec spec_from_json(const Json& j, const std::string& path);

// {"kind": "power", "params": {"space", "q"}} | {"kind": "direct_sum", "params": {"parts"}}
// | {"kind": "nakano", "params": {"spec"}}
Json to_json(const ConvexModular& theta);
ConvexModular modular_from_json(const Json& j, const std::string& path);

// [{"n": 1, "x": [...]}, ...]
Json to_json(const BlockVector& x);
BlockVector block_vector_from_json(const Json& j, const std::string& path);

Json to_json(const ViolationReport& r);
Json to_json(const JvnEstimate& e);
Json to_json(const AsymptoticsReport& r);
Json to_json(const TailParallelogramReport& r);
Json to_json(const NakanoTerms& t);
Json to_json(const NakanoConditionResult& r);
Json to_json(const IterationTrace& t);
Json to_json(const SummandSearch& s);
Json to_json(const LimitIsometryReport& r);
Json to_json(const RangeIntersection& r);

// Plain CSV table: header row, then rows of numbers at 17 significant digits.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string render() const;
};

// One row per report: check, space, samples, max_violation, tolerance, seed, verdict.
std::string violation_csv(const std::vector<ViolationReport>& reports);

}  // namespace modbanach
