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

// JSON file formats, result serialization and CSV output.
//
// Readers are strict: unknown keys, wrong types and out-of-range values
// throw SchemaError carrying a JSON pointer to the field (or "byte N" for
// syntax errors). Writers emit a canonical form with sorted keys, so
// load(save(load(f))) == load(f) and re-serialization is stable.

#ifndef ENDOGRAPH_IO_H_
#define ENDOGRAPH_IO_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "endograph/estimators.h"
#include "endograph/examples.h"
#include "endograph/graph.h"
#include "endograph/hypothesis_tests.h"
#include "endograph/montecarlo.h"
#include "endograph/outcomes.h"

namespace endograph {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Files

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

// Throws SchemaError("byte N", ...) on malformed text.
Json parse_json(std::string_view text);

// "fnv1a64:" followed by 16 hex digits.
std::string content_hash(std::string_view bytes);

// ---------------------------------------------------------------------------
// Strict object reader

class ObjectReader {
 public:
  // Throws SchemaError unless `value` is an object.
  ObjectReader(const Json& value, std::string path);

  bool has(std::string_view key) const;
  // Marks the key as consumed; nullptr when absent.
  const Json* get(std::string_view key);
  // Throws SchemaError when absent.
  const Json& require(std::string_view key);
  std::string path_of(std::string_view key) const;
  const std::string& path() const { return path_; }
  // Throws SchemaError naming the first key never consumed.
  void finish() const;

 private:
  const Json& value_;
  std::string path_;
  std::vector<std::string> consumed_;
};

int json_int(const Json& value, const std::string& path);
std::uint64_t json_uint64(const Json& value, const std::string& path);
double json_double(const Json& value, const std::string& path);
bool json_bool(const Json& value, const std::string& path);
std::string json_string(const Json& value, const std::string& path);
std::vector<double> json_doubles(const Json& value, const std::string& path);

// ---------------------------------------------------------------------------
// Domain formats

// A graph file: the edge rule plus an optional anchor pair list that
// configs may inherit.
struct GraphFile {
  EndogenousGraph graph;
  std::optional<PairList> anchor;
  friend bool operator==(const GraphFile&, const GraphFile&) = default;
};
GraphFile graph_file_from_json(const Json& value, const std::string& path = "");
Json to_json(const GraphFile& file);
// Same format; any anchor list is checked and dropped.
EndogenousGraph graph_from_json(const Json& value,
                                const std::string& path = "");
Json to_json(const EndogenousGraph& graph);

ExposureWeights weights_from_json(const Json& value,
                                  const EndogenousGraph& graph,
                                  const std::string& path = "");
Json to_json(const ExposureWeights& w);

OutcomeModel outcome_model_from_json(const Json& value,
                                     const EndogenousGraph& graph,
                                     const std::string& path = "");
Json to_json(const OutcomeModel& model);

// Used when the config block omits "weights" or "anchor". Weights fall back
// to uniform; a missing anchor with no default is a schema error.
struct ConfigDefaults {
  std::optional<ExposureWeights> w;
  std::optional<PairList> anchor;
};
EstimatorConfig config_from_json(const Json& value,
                                 const EndogenousGraph& graph,
                                 const ConfigDefaults& defaults = {},
                                 const std::string& path = "");
Json to_json(const EstimatorConfig& config);

// Observed data for `estimate` and `test`: the assignment and outcomes.
struct Observations {
  TreatmentVector t;
  UnitValues y;
  friend bool operator==(const Observations&, const Observations&) = default;
};
Observations observations_from_json(const Json& value,
                                    const std::string& path = "");
Json to_json(const Observations& obs);

TreatmentVector treatment_from_json(const Json& value,
                                    const std::string& path);
PairList pairs_from_json(const Json& value, const std::string& path);
Json to_json(const PairList& pairs);

ScenarioSpec scenario_spec_from_json(const Json& value,
                                     const std::string& path = "");
Json to_json(const ScenarioSpec& spec);
EdgeDgpSpec edge_dgp_from_json(const Json& value,
                               const std::string& path = "");
Json to_json(const EdgeDgpSpec& spec);

// A scenario file holds exactly one of: a generator spec, an edge-formation
// DGP spec, or an explicit graph + model + config triple.
struct ScenarioFile {
  std::string name;
  std::optional<ScenarioSpec> generator;
  std::optional<EdgeDgpSpec> edge_dgp;
  std::optional<EndogenousGraph> graph;
  std::optional<OutcomeModel> model;
  std::optional<EstimatorConfig> config;

  bool is_explicit() const { return graph.has_value(); }
  friend bool operator==(const ScenarioFile&, const ScenarioFile&) = default;
};
ScenarioFile scenario_from_json(const Json& value,
                                const std::string& path = "");
Json to_json(const ScenarioFile& scenario);

// Builds the estimator scenario, resizing generator scenarios to the
// requested sizes (n_r alone rescales n_a proportionally). Explicit scenarios reject size overrides that differ
// from the stored graph. Throws ValidationError for edge-DGP scenarios.
ScenarioInstance instantiate(const ScenarioFile& scenario,
                             std::optional<int> n_a = std::nullopt,
                             std::optional<int> n_r = std::nullopt);

// File wrappers: IoError for unreadable paths, SchemaError otherwise.
GraphFile load_graph(const std::string& path);
Observations load_observations(const std::string& path);
ScenarioFile load_scenario(const std::string& path);
void save_scenario(const ScenarioFile& scenario, const std::string& path);

// ---------------------------------------------------------------------------
// Results

Json to_json(const EstimateResult& result);
Json to_json(const TestResult& result);
// Per-replication arrays are left to the CSV writer.
Json to_json(const ReplicationSummary& summary);
Json to_json(const ScalingReport& report);
Json to_json(const NormalityReport& report);
Json to_json(const VerificationReport& report);
Json to_json(const DependencyReport& report);
Json to_json(const RejectionRate& rate);
Json to_json(const BiasReport& report);

struct RunReport {
  std::string command;
  // Resolved options.
  Json args = Json::object();
  // Input name -> content hash.
  Json inputs = Json::object();
  Json results = Json::object();
  // Phase name -> wall-clock seconds.
  std::vector<std::pair<std::string, double>> timing;
};

Json to_json(const RunReport& report, bool include_timing = true);

// ---------------------------------------------------------------------------
// CSV

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Shortest round-trip decimal form; "nan"/"inf"/"-inf" for non-finite.
std::string format_number(double value);
std::string to_csv(const CsvTable& table);

}  // namespace endograph

#endif  // ENDOGRAPH_IO_H_
