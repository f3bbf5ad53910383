// Copyright 2026 The Endograph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "endograph/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "endograph/errors.h"

namespace endograph {
namespace {

std::string display(const std::string& path) {
  return path.empty() ? "/" : path;
}

[[noreturn]] void fail(const std::string& path, const std::string& detail) {
  throw SchemaError(display(path), detail);
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "/" + std::to_string(i);
}

const Json& array_at(const Json& value, const std::string& path) {
  if (!value.is_array()) fail(path, "expected an array");
  return value;
}

std::vector<int> json_ints(const Json& value, const std::string& path) {
  array_at(value, path);
  std::vector<int> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(json_int(value[i], index_path(path, i)));
  }
  return out;
}

Json json_number(double v) {
  // NaN and infinities serialize as null.
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

Json json_numbers(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(json_number(x));
  return out;
}

Json json_optional(const std::optional<double>& v) {
  return v ? json_number(*v) : Json(nullptr);
}

Range range_from_json(const Json& value, const std::string& path) {
  const std::vector<double> xs = json_doubles(value, path);
  if (xs.size() != 2) fail(path, "expected [low, high]");
  if (xs[0] > xs[1]) fail(path, "range needs low <= high");
  return {xs[0], xs[1]};
}

Json to_json(const Range& range) { return Json::array({range.low, range.high}); }

std::vector<WeightEntry> weight_entries_from_json(const Json& value,
                                                  const std::string& path) {
  array_at(value, path);
  std::vector<WeightEntry> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const std::string p = index_path(path, i);
    const Json& e = value[i];
    if (!e.is_array() || e.size() != 3) fail(p, "expected [a, r, weight]");
    out.push_back({json_int(e[0], p + "/0"), json_int(e[1], p + "/1"),
                   json_double(e[2], p + "/2")});
  }
  return out;
}

Json to_json(const std::vector<WeightEntry>& entries) {
  Json out = Json::array();
  for (const auto& e : entries) out.push_back(Json::array({e.a, e.r, e.w}));
  return out;
}

template <typename F>
auto with_schema_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Files

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("cannot write " + path);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw SchemaError("byte " + std::to_string(e.byte), e.what());
  }
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

// ---------------------------------------------------------------------------
// ObjectReader and scalars

ObjectReader::ObjectReader(const Json& value, std::string path)
    : value_(value), path_(std::move(path)) {
  if (!value_.is_object()) fail(path_, "expected an object");
}

bool ObjectReader::has(std::string_view key) const {
  return value_.contains(key);
}

const Json* ObjectReader::get(std::string_view key) {
  auto it = value_.find(key);
  if (it == value_.end()) return nullptr;
  consumed_.emplace_back(key);
  return &*it;
}

const Json& ObjectReader::require(std::string_view key) {
  const Json* v = get(key);
  if (v == nullptr) fail(path_of(key), "required field is missing");
  return *v;
}

std::string ObjectReader::path_of(std::string_view key) const {
  return path_ + "/" + std::string(key);
}

void ObjectReader::finish() const {
  for (const auto& [key, unused] : value_.items()) {
    if (std::find(consumed_.begin(), consumed_.end(), key) ==
        consumed_.end()) {
      fail(path_of(key), "unknown field");
    }
  }
}

int json_int(const Json& value, const std::string& path) {
  if (!value.is_number_integer()) fail(path, "expected an integer");
  if (value.is_number_unsigned()) {
    const auto v = value.get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
      fail(path, "integer out of range");
    }
    return static_cast<int>(v);
  }
  const auto v = value.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() ||
      v > std::numeric_limits<int>::max()) {
    fail(path, "integer out of range");
  }
  return static_cast<int>(v);
}

std::uint64_t json_uint64(const Json& value, const std::string& path) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer()) fail(path, "expected a nonnegative integer");
  fail(path, "expected an integer");
}

double json_double(const Json& value, const std::string& path) {
  if (!value.is_number()) fail(path, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

bool json_bool(const Json& value, const std::string& path) {
  if (!value.is_boolean()) fail(path, "expected true or false");
  return value.get<bool>();
}

std::string json_string(const Json& value, const std::string& path) {
  if (!value.is_string()) fail(path, "expected a string");
  return value.get<std::string>();
}

std::vector<double> json_doubles(const Json& value, const std::string& path) {
  array_at(value, path);
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(json_double(value[i], index_path(path, i)));
  }
  return out;
}

TreatmentVector treatment_from_json(const Json& value,
                                    const std::string& path) {
  array_at(value, path);
  std::vector<std::uint8_t> bits;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const int v = json_int(value[i], index_path(path, i));
    if (v != 0 && v != 1) fail(index_path(path, i), "expected 0 or 1");
    bits.push_back(static_cast<std::uint8_t>(v));
  }
  if (bits.empty()) fail(path, "treatment vector is empty");
  return TreatmentVector(std::move(bits));
}

Json treatment_to_json(const TreatmentVector& t) {
  Json out = Json::array();
  for (auto b : t.bits()) out.push_back(static_cast<int>(b));
  return out;
}

PairList pairs_from_json(const Json& value, const std::string& path) {
  array_at(value, path);
  PairList out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const std::string p = index_path(path, i);
    const Json& e = value[i];
    if (!e.is_array() || e.size() != 2) fail(p, "expected [a, r]");
    out.push_back({json_int(e[0], p + "/0"), json_int(e[1], p + "/1")});
  }
  return out;
}

Json to_json(const PairList& pairs) {
  Json out = Json::array();
  for (const auto& [a, r] : pairs) out.push_back(Json::array({a, r}));
  return out;
}

// ---------------------------------------------------------------------------
// Graph

namespace {

// Table keys are bitstrings; character i is T at depends_on[i].
std::string table_key(std::size_t index, std::size_t width) {
  std::string key(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    if ((index >> i) & 1U) key[i] = '1';
  }
  return key;
}

EdgeFunction edge_function_from_json(ObjectReader& e, int n_r) {
  std::vector<int> deps =
      json_ints(e.require("depends_on"), e.path_of("depends_on"));
  for (std::size_t k = 0; k < deps.size(); ++k) {
    if (deps[k] < 0 || deps[k] >= n_r) {
      fail(index_path(e.path_of("depends_on"), k),
           "randomization unit out of range");
    }
  }
  if (deps.size() > EdgeFunction::kMaxDependencies) {
    throw CapExceededError(
        e.path_of("depends_on") + ": dependency set of size " +
        std::to_string(deps.size()) + " exceeds the cap of " +
        std::to_string(EdgeFunction::kMaxDependencies));
  }
  const std::string table_path = e.path_of("table");
  const Json& table_json = e.require("table");
  if (!table_json.is_object()) fail(table_path, "expected an object");
  const std::size_t size = std::size_t{1} << deps.size();
  std::vector<std::uint8_t> table(size, 0);
  std::vector<bool> filled(size, false);
  for (const auto& [key, bit] : table_json.items()) {
    const std::string p = table_path + "/" + key;
    if (key.size() != deps.size() ||
        key.find_first_not_of("01") != std::string::npos) {
      fail(p, "key must be a bitstring of length " +
                  std::to_string(deps.size()));
    }
    std::size_t index = 0;
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (key[i] == '1') index |= std::size_t{1} << i;
    }
    const int v = json_int(bit, p);
    if (v != 0 && v != 1) fail(p, "expected 0 or 1");
    table[index] = static_cast<std::uint8_t>(v);
    filled[index] = true;
  }
  for (std::size_t k = 0; k < size; ++k) {
    if (!filled[k]) {
      fail(table_path, "missing entry for '" + table_key(k, deps.size()) + "'");
    }
  }
  return with_schema_path(e.path(), [&] {
    return EdgeFunction(std::move(deps), std::move(table));
  });
}

}  // namespace

GraphFile graph_file_from_json(const Json& value, const std::string& path) {
  ObjectReader in(value, path);
  const int n_a = json_int(in.require("n_a"), in.path_of("n_a"));
  const int n_r = json_int(in.require("n_r"), in.path_of("n_r"));
  bool unipartite = false;
  if (const Json* u = in.get("unipartite")) {
    unipartite = json_bool(*u, in.path_of("unipartite"));
  }
  const UnitSets units{n_a, n_r, unipartite};
  with_schema_path(path, [&] {
    units.validate();
    return 0;
  });

  ObjectReader rule(in.require("rule"), in.path_of("rule"));
  const std::string kind_name =
      json_string(rule.require("kind"), rule.path_of("kind"));
  const auto kind = parse_edge_rule_kind(kind_name);
  if (!kind) {
    fail(rule.path_of("kind"),
         "unknown edge rule '" + kind_name +
             "'; expected exogenous, r_driven, set_driven or unrestricted");
  }

  GraphBuilder builder(units, *kind);
  const std::string entries_path = rule.path_of("entries");
  const Json& entries = array_at(rule.require("entries"), entries_path);
  std::vector<EdgePair> seen;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string p = index_path(entries_path, i);
    ObjectReader e(entries[i], p);
    const int a = json_int(e.require("a"), e.path_of("a"));
    const int r = json_int(e.require("r"), e.path_of("r"));
    if (a < 0 || a >= n_a) fail(e.path_of("a"), "analysis unit out of range");
    if (r < 0 || r >= n_r) {
      fail(e.path_of("r"), "randomization unit out of range");
    }
    if (std::find(seen.begin(), seen.end(), EdgePair{a, r}) != seen.end()) {
      fail(p, "duplicate edge (" + std::to_string(a) + ", " +
                  std::to_string(r) + ")");
    }
    seen.push_back({a, r});
    if (const Json* v = e.get("value")) {
      // Shorthand for a constant edge.
      if (e.has("depends_on") || e.has("table")) {
        fail(p, "give either value or depends_on + table");
      }
      const int bit = json_int(*v, e.path_of("value"));
      if (bit != 0 && bit != 1) fail(e.path_of("value"), "expected 0 or 1");
      builder.constant(a, r, bit == 1);
    } else {
      builder.set(a, r, edge_function_from_json(e, n_r));
    }
    e.finish();
  }
  rule.finish();

  if (const Json* pre = in.get("pre_edges")) {
    const std::string pre_path = in.path_of("pre_edges");
    const PairList pairs = pairs_from_json(*pre, pre_path);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].a < 0 || pairs[i].a >= n_a || pairs[i].r < 0 ||
          pairs[i].r >= n_r) {
        fail(index_path(pre_path, i), "pre-period edge out of range");
      }
      builder.pre_edge(pairs[i].a, pairs[i].r);
    }
  }
  GraphFile out{with_schema_path(path, [&] { return builder.build(); }),
                std::nullopt};
  if (const Json* anchor = in.get("anchor")) {
    const std::string anchor_path = in.path_of("anchor");
    PairList pairs = pairs_from_json(*anchor, anchor_path);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].a < 0 || pairs[i].a >= n_a || pairs[i].r < 0 ||
          pairs[i].r >= n_r) {
        fail(index_path(anchor_path, i), "anchor pair out of range");
      }
    }
    out.anchor = std::move(pairs);
  }
  in.finish();
  return out;
}

EndogenousGraph graph_from_json(const Json& value, const std::string& path) {
  return graph_file_from_json(value, path).graph;
}

Json to_json(const GraphFile& file) {
  Json entries = Json::array();
  const EndogenousGraph& graph = file.graph;
  for (int a = 0; a < graph.n_a(); ++a) {
    for (const auto& entry : graph.entries(a)) {
      const auto deps = entry.fn.depends_on();
      Json table = Json::object();
      const auto values = entry.fn.table();
      for (std::size_t k = 0; k < values.size(); ++k) {
        table[table_key(k, deps.size())] = static_cast<int>(values[k]);
      }
      entries.push_back({{"a", a},
                         {"r", entry.r},
                         {"depends_on", std::vector<int>(deps.begin(), deps.end())},
                         {"table", std::move(table)}});
    }
  }
  Json out = {{"n_a", graph.n_a()},
              {"n_r", graph.n_r()},
              {"unipartite", graph.unipartite()},
              {"rule",
               {{"kind", std::string(to_string(graph.declared_kind()))},
                {"entries", std::move(entries)}}},
              {"pre_edges", to_json(graph.pre_edges())}};
  if (file.anchor) out["anchor"] = to_json(*file.anchor);
  return out;
}

Json to_json(const EndogenousGraph& graph) {
  return to_json(GraphFile{graph, std::nullopt});
}

// ---------------------------------------------------------------------------
// Weights, outcome model, config

ExposureWeights weights_from_json(const Json& value,
                                  const EndogenousGraph& graph,
                                  const std::string& path) {
  ObjectReader in(value, path);
  const std::string kind = json_string(in.require("kind"), in.path_of("kind"));
  ExposureWeights w;
  if (kind == "uniform") {
    w = ExposureWeights::uniform(graph.units());
  } else if (kind == "degree_normalized") {
    w = ExposureWeights::degree_normalized(graph);
  } else if (kind == "explicit") {
    double fallback = 1.0;
    if (const Json* d = in.get("default")) {
      fallback = json_double(*d, in.path_of("default"));
    }
    std::vector<WeightEntry> entries;
    if (const Json* e = in.get("entries")) {
      entries = weight_entries_from_json(*e, in.path_of("entries"));
    }
    w = with_schema_path(in.path_of("entries"), [&] {
      return ExposureWeights::explicit_weights(graph.units(), fallback,
                                               std::move(entries));
    });
  } else {
    fail(in.path_of("kind"), "unknown weight kind '" + kind +
                                 "'; expected uniform, degree_normalized or "
                                 "explicit");
  }
  in.finish();
  return w;
}

Json to_json(const ExposureWeights& w) {
  Json out = {{"kind", std::string(to_string(w.kind()))}};
  if (w.kind() == ExposureWeights::Kind::kExplicit) {
    out["default"] = w.default_weight();
    out["entries"] = to_json(w.entries());
  }
  return out;
}

OutcomeModel outcome_model_from_json(const Json& value,
                                     const EndogenousGraph& graph,
                                     const std::string& path) {
  ObjectReader in(value, path);
  OutcomeModel model;
  model.alpha = json_doubles(in.require("alpha"), in.path_of("alpha"));
  model.beta = json_doubles(in.require("beta"), in.path_of("beta"));
  if (const Json* g = in.get("gamma")) {
    model.gamma = json_doubles(*g, in.path_of("gamma"));
  }
  if (const Json* w = in.get("weights")) {
    model.weights = weights_from_json(*w, graph, in.path_of("weights"));
  } else {
    model.weights = ExposureWeights::uniform(graph.units());
  }
  if (const Json* m = in.get("bound_m")) {
    model.bound_m = json_double(*m, in.path_of("bound_m"));
  }
  if (const Json* b = in.get("band")) {
    ObjectReader band(*b, in.path_of("band"));
    model.band = WeightBand{
        json_double(band.require("low"), band.path_of("low")),
        json_double(band.require("high"), band.path_of("high"))};
    band.finish();
  }
  in.finish();
  with_schema_path(path, [&] {
    model.validate(graph.units());
    return 0;
  });
  return model;
}

Json to_json(const OutcomeModel& model) {
  Json out = {{"alpha", json_numbers(model.alpha)},
              {"beta", json_numbers(model.beta)},
              {"weights", to_json(model.weights)}};
  if (!model.gamma.empty()) out["gamma"] = json_numbers(model.gamma);
  if (model.bound_m) out["bound_m"] = *model.bound_m;
  if (model.band) {
    out["band"] = {{"low", model.band->low}, {"high", model.band->high}};
  }
  return out;
}

EstimatorConfig config_from_json(const Json& value,
                                 const EndogenousGraph& graph,
                                 const ConfigDefaults& defaults,
                                 const std::string& path) {
  ObjectReader in(value, path);
  PairList pairs;
  if (const Json* anchor = in.get("anchor"); anchor || !defaults.anchor) {
    pairs = pairs_from_json(in.require("anchor"), in.path_of("anchor"));
  } else {
    pairs = *defaults.anchor;
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].a < 0 || pairs[i].a >= graph.n_a() || pairs[i].r < 0 ||
        pairs[i].r >= graph.n_r()) {
      fail(index_path(in.path_of("anchor"), i), "anchor pair out of range");
    }
  }
  EstimatorConfig config;
  config.anchor = AnchorSubgraph(graph.n_a(), pairs);
  config.p = json_double(in.require("p"), in.path_of("p"));
  if (const Json* w = in.get("weights")) {
    config.w = weights_from_json(*w, graph, in.path_of("weights"));
  } else if (defaults.w) {
    config.w = *defaults.w;
  } else {
    config.w = ExposureWeights::uniform(graph.units());
  }
  config.u = InstrumentWeights::uniform(config.anchor, graph.unipartite());
  if (const Json* u = in.get("u")) {
    ObjectReader ur(*u, in.path_of("u"));
    const std::string kind = json_string(ur.require("kind"), ur.path_of("kind"));
    if (kind == "explicit") {
      std::vector<WeightEntry> entries =
          weight_entries_from_json(ur.require("entries"), ur.path_of("entries"));
      for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].r < 0 || entries[i].r >= graph.n_r()) {
          fail(index_path(ur.path_of("entries"), i),
               "instrument weight out of range");
        }
      }
      config.u = with_schema_path(ur.path_of("entries"), [&] {
        return InstrumentWeights::explicit_weights(graph.n_a(),
                                                   std::move(entries));
      });
    } else if (kind != "uniform") {
      fail(ur.path_of("kind"), "unknown instrument kind '" + kind +
                                   "'; expected uniform or explicit");
    }
    ur.finish();
  }
  if (const Json* b = in.get("bounds")) {
    ObjectReader br(*b, in.path_of("bounds"));
    config.bounds = BoundConstants{
        json_double(br.require("m"), br.path_of("m")),
        json_double(br.require("w_low"), br.path_of("w_low")),
        json_double(br.require("w_high"), br.path_of("w_high"))};
    br.finish();
  }
  in.finish();
  return config;
}

Json to_json(const EstimatorConfig& config) {
  Json u = {{"kind", config.u.kind() == InstrumentWeights::Kind::kUniform
                         ? "uniform"
                         : "explicit"}};
  if (config.u.kind() == InstrumentWeights::Kind::kExplicit) {
    u["entries"] = to_json(config.u.entries());
  }
  Json out = {{"anchor", to_json(config.anchor.pairs())},
              {"p", config.p},
              {"u", std::move(u)},
              {"weights", to_json(config.w)}};
  if (config.bounds) {
    out["bounds"] = {{"m", config.bounds->m},
                     {"w_low", config.bounds->w_low},
                     {"w_high", config.bounds->w_high}};
  }
  return out;
}

Observations observations_from_json(const Json& value,
                                    const std::string& path) {
  ObjectReader in(value, path);
  Observations obs;
  obs.t = treatment_from_json(in.require("t"), in.path_of("t"));
  obs.y = json_doubles(in.require("y"), in.path_of("y"));
  in.finish();
  return obs;
}

Json to_json(const Observations& obs) {
  return {{"t", treatment_to_json(obs.t)}, {"y", json_numbers(obs.y)}};
}

// ---------------------------------------------------------------------------
// Scenarios

ScenarioSpec scenario_spec_from_json(const Json& value,
                                     const std::string& path) {
  ObjectReader in(value, path);
  ScenarioSpec s;
  auto opt_int = [&](const char* key, int& out) {
    if (const Json* v = in.get(key)) out = json_int(*v, in.path_of(key));
  };
  auto opt_range = [&](const char* key, Range& out) {
    if (const Json* v = in.get(key)) out = range_from_json(*v, in.path_of(key));
  };
  opt_int("n_a", s.n_a);
  opt_int("n_r", s.n_r);
  opt_int("anchor_degree", s.anchor_degree);
  opt_int("created_degree", s.created_degree);
  opt_int("dropped_degree", s.dropped_degree);
  opt_int("max_r_degree", s.max_r_degree);
  opt_range("alpha", s.alpha);
  opt_range("beta", s.beta);
  opt_range("gamma", s.gamma);
  if (const Json* w = in.get("weights")) {
    const std::string kind = json_string(*w, in.path_of("weights"));
    if (kind == "uniform") {
      s.weights = ExposureWeights::Kind::kUniform;
    } else if (kind == "degree_normalized") {
      s.weights = ExposureWeights::Kind::kDegreeNormalized;
    } else {
      fail(in.path_of("weights"),
           "expected uniform or degree_normalized, got '" + kind + "'");
    }
  }
  if (const Json* u = in.get("unipartite")) {
    s.unipartite = json_bool(*u, in.path_of("unipartite"));
  }
  if (const Json* p = in.get("p")) s.p = json_double(*p, in.path_of("p"));
  if (const Json* seed = in.get("seed")) {
    s.seed = json_uint64(*seed, in.path_of("seed"));
  }
  in.finish();
  return s;
}

Json to_json(const ScenarioSpec& s) {
  return {{"n_a", s.n_a},
          {"n_r", s.n_r},
          {"anchor_degree", s.anchor_degree},
          {"created_degree", s.created_degree},
          {"dropped_degree", s.dropped_degree},
          {"max_r_degree", s.max_r_degree},
          {"alpha", to_json(s.alpha)},
          {"beta", to_json(s.beta)},
          {"gamma", to_json(s.gamma)},
          {"weights", std::string(to_string(s.weights))},
          {"unipartite", s.unipartite},
          {"p", s.p},
          {"seed", s.seed}};
}

EdgeDgpSpec edge_dgp_from_json(const Json& value, const std::string& path) {
  ObjectReader in(value, path);
  EdgeDgpSpec s;
  const std::string kind = json_string(in.require("kind"), in.path_of("kind"));
  const auto parsed = parse_edge_dgp(kind);
  if (!parsed) {
    fail(in.path_of("kind"), "unknown edge DGP '" + kind +
                                 "'; expected exogenous, r_driven or "
                                 "partner_driven");
  }
  s.kind = *parsed;
  auto opt_int = [&](const char* key, int& out) {
    if (const Json* v = in.get(key)) out = json_int(*v, in.path_of(key));
  };
  opt_int("n_a", s.n_a);
  opt_int("n_r", s.n_r);
  opt_int("base_degree", s.base_degree);
  opt_int("created_degree", s.created_degree);
  if (const Json* c = in.get("churn")) {
    s.churn = json_double(*c, in.path_of("churn"));
  }
  if (const Json* p = in.get("p")) s.p = json_double(*p, in.path_of("p"));
  if (const Json* seed = in.get("seed")) {
    s.seed = json_uint64(*seed, in.path_of("seed"));
  }
  in.finish();
  return s;
}

Json to_json(const EdgeDgpSpec& s) {
  return {{"kind", std::string(to_string(s.kind))},
          {"n_a", s.n_a},
          {"n_r", s.n_r},
          {"base_degree", s.base_degree},
          {"created_degree", s.created_degree},
          {"churn", s.churn},
          {"p", s.p},
          {"seed", s.seed}};
}

ScenarioFile scenario_from_json(const Json& value, const std::string& path) {
  ObjectReader in(value, path);
  ScenarioFile out;
  if (const Json* n = in.get("name")) out.name = json_string(*n, in.path_of("name"));
  const bool has_generator = in.has("generator");
  const bool has_dgp = in.has("edge_dgp");
  const bool has_graph = in.has("graph");
  if (int(has_generator) + int(has_dgp) + int(has_graph) != 1) {
    fail(path, "scenario needs exactly one of generator, edge_dgp or graph");
  }
  if (has_generator) {
    out.generator =
        scenario_spec_from_json(in.require("generator"), in.path_of("generator"));
  } else if (has_dgp) {
    out.edge_dgp =
        edge_dgp_from_json(in.require("edge_dgp"), in.path_of("edge_dgp"));
  } else {
    out.graph = graph_from_json(in.require("graph"), in.path_of("graph"));
    out.model = outcome_model_from_json(in.require("model"), *out.graph,
                                        in.path_of("model"));
    out.config = config_from_json(in.require("config"), *out.graph,
                                  {out.model->weights, std::nullopt},
                                  in.path_of("config"));
  }
  in.finish();
  return out;
}

Json to_json(const ScenarioFile& scenario) {
  Json out = Json::object();
  if (!scenario.name.empty()) out["name"] = scenario.name;
  if (scenario.generator) out["generator"] = to_json(*scenario.generator);
  if (scenario.edge_dgp) out["edge_dgp"] = to_json(*scenario.edge_dgp);
  if (scenario.graph) {
    out["graph"] = to_json(*scenario.graph);
    out["model"] = to_json(*scenario.model);
    out["config"] = to_json(*scenario.config);
  }
  return out;
}

ScenarioInstance instantiate(const ScenarioFile& scenario,
                             std::optional<int> n_a, std::optional<int> n_r) {
  if (scenario.generator) {
    ScenarioSpec spec = *scenario.generator;
    if (n_a) {
      spec = at_size(spec, *n_a);
    } else if (n_r) {
      // Keep n_a / n_r when only n_r is given.
      const double ratio = double(spec.n_a) / double(spec.n_r);
      spec = at_size(spec, std::max(1, int(std::lround(ratio * *n_r))));
    }
    if (n_r) {
      spec.n_r = *n_r;
      if (spec.unipartite) spec.n_a = *n_r;
    }
    return generate_scenario(spec);
  }
  if (scenario.edge_dgp) {
    throw ValidationError(
        "edge-formation scenarios carry no outcome model; use them with the "
        "exogeneity or t-test commands");
  }
  const EndogenousGraph& graph = *scenario.graph;
  if ((n_a && *n_a != graph.n_a()) || (n_r && *n_r != graph.n_r())) {
    throw ValidationError("explicit scenarios cannot be resized (graph has n_a = " +
                          std::to_string(graph.n_a()) + ", n_r = " +
                          std::to_string(graph.n_r()) + ")");
  }
  const double tte = true_tte(graph, *scenario.model);
  return ScenarioInstance{graph, *scenario.model, scenario.config, tte,
                          scenario.config->p};
}

GraphFile load_graph(const std::string& path) {
  return graph_file_from_json(parse_json(read_text_file(path)));
}

Observations load_observations(const std::string& path) {
  return observations_from_json(parse_json(read_text_file(path)));
}

ScenarioFile load_scenario(const std::string& path) {
  return scenario_from_json(parse_json(read_text_file(path)));
}

void save_scenario(const ScenarioFile& scenario, const std::string& path) {
  write_text_file(path, to_json(scenario).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Results

Json to_json(const EstimateResult& result) {
  Json units = Json::array();
  for (const auto& u : result.per_unit) {
    units.push_back({{"beta_hat", json_number(u.beta_hat)},
                     {"w_hat", json_number(u.w_hat)},
                     {"gamma_hat", json_optional(u.gamma_hat)}});
  }
  return {{"mu_hat", json_number(result.mu_hat)},
          {"per_unit", std::move(units)},
          {"instrument_cov", json_numbers(result.instrument_cov)},
          {"diagnostics",
           {{"d_a", result.diagnostics.d_a},
            {"d_r", result.diagnostics.d_r},
            {"unit_bounds", json_numbers(result.diagnostics.unit_bounds)}}}};
}

Json to_json(const TestResult& result) {
  return {{"statistic", json_number(result.statistic)},
          {"p_value", json_number(result.p_value)},
          {"critical_value", json_optional(result.critical_value)},
          {"n_resamples", result.n_resamples},
          {"reject", result.reject},
          {"alpha", result.alpha},
          {"tail", std::string(to_string(result.tail))},
          {"df", json_optional(result.df)}};
}

Json to_json(const ReplicationSummary& s) {
  return {{"n_reps", s.n_reps},
          {"mean", json_number(s.mean)},
          {"variance", json_number(s.variance)},
          {"truth", json_number(s.truth)},
          {"bias_vs_truth", json_number(s.bias_vs_truth)},
          {"standard_error",
           json_number(std::sqrt(s.variance / std::max(s.n_reps, 1)))},
          {"ks_distance", json_optional(s.ks_distance)},
          {"d_a", s.d_a},
          {"d_r", s.d_r},
          {"dependency_degree", s.dependency_degree}};
}

Json to_json(const ScalingReport& report) {
  Json points = Json::array();
  for (const auto& p : report.points) {
    points.push_back({{"n_a", p.n_a},
                      {"n_r", p.n_r},
                      {"variance", json_number(p.variance)},
                      {"mean", json_number(p.mean)},
                      {"truth", json_number(p.truth)},
                      {"d_a", p.d_a},
                      {"d_r", p.d_r},
                      {"envelope", json_number(p.envelope)}});
  }
  return {{"points", std::move(points)},
          {"slope", json_number(report.slope)},
          {"intercept", json_number(report.intercept)},
          {"max_envelope_ratio", json_number(report.max_envelope_ratio)}};
}

Json to_json(const NormalityReport& report) {
  return {{"n_reps", report.n_reps},
          {"ks_distance", json_number(report.ks_distance)},
          {"mean", json_number(report.mean)},
          {"sd", json_number(report.sd)},
          {"truth", json_number(report.truth)}};
}

Json to_json(const VerificationReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"a", v.pair.a},
                          {"r", v.pair.r},
                          {"witness", treatment_to_json(v.witness)}});
  }
  return {{"pass", report.pass},
          {"violations", std::move(violations)},
          {"evaluations", report.evaluations}};
}

Json to_json(const DependencyReport& report) {
  Json pairs = Json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"a", p.pair.a},
                     {"r", p.pair.r},
                     {"minimal_set", p.minimal_set},
                     {"kind", std::string(to_string(p.kind))}});
  }
  return {{"kind", std::string(to_string(report.kind))},
          {"pairs", std::move(pairs)}};
}

Json to_json(const RejectionRate& rate) {
  return {{"n_reps", rate.n_reps},
          {"rejections", rate.rejections},
          {"rate", json_number(rate.rate)},
          {"null_se", json_number(rate.null_se)}};
}

Json to_json(const BiasReport& report) {
  Json examples = Json::array();
  for (const auto& e : report.examples) {
    Json cases = Json::array();
    for (const auto& c : e.cases) {
      cases.push_back({{"t", treatment_to_json(c.t)},
                       {"probability", json_number(c.probability)},
                       {"ht_total", json_number(c.ht_total)},
                       {"ht_mean", json_number(c.ht_mean)}});
    }
    examples.push_back(
        {{"example", e.example},
         {"p", e.p},
         {"y", json_numbers(e.y)},
         {"tte", json_number(e.tte)},
         {"ht_expectation", json_number(e.ht_expectation_total)},
         {"ht_expectation_mean_scale", json_number(e.ht_expectation_mean)},
         {"ht_bias", json_number(e.ht_expectation_total - e.tte)},
         {"mu_hat_expectation_anchored", json_number(e.mu_hat_expectation)},
         {"cases", std::move(cases)}});
  }
  return {{"examples", std::move(examples)}};
}

Json to_json(const RunReport& report, bool include_timing) {
  Json out = {{"command", {{"name", report.command}, {"args", report.args}}},
              {"inputs", report.inputs},
              {"results", report.results}};
  if (include_timing) {
    Json timing = Json::object();
    for (const auto& [phase, seconds] : report.timing) timing[phase] = seconds;
    out["timing"] = std::move(timing);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string to_csv(const CsvTable& table) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += field(cells[i]);
    }
    return out + "\n";
  };
  std::string out = line(table.header);
  for (const auto& row : table.rows) out += line(row);
  return out;
}

}  // namespace endograph
