// Copyright 2026 The fairnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairnet/scenario_io.h"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace fairnet {
namespace {

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void Fail(const YAML::Node& node, const std::string& field,
                         const std::string& message) const {
    const int line = node.IsDefined() ? node.Mark().line + 1 : 0;
    throw ScenarioParseError(origin_, line, field, message);
  }

  void RequireMap(const YAML::Node& node, const std::string& field) const {
    if (!node.IsMap()) Fail(node, field, "expected a mapping");
  }

  void RejectUnknown(const YAML::Node& node, const std::string& field,
                     const std::set<std::string>& allowed) const {
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      if (allowed.count(key) == 0) {
        Fail(kv.first, field.empty() ? key : field + "." + key, "unknown key '" + key + "'");
      }
    }
  }

  YAML::Node Required(const YAML::Node& map, const std::string& key,
                      const std::string& field) const {
    YAML::Node v = map[key];
    if (!v.IsDefined() || v.IsNull()) Fail(map, field, "missing required key '" + key + "'");
    return v;
  }

  std::string Scalar(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) Fail(node, field, "expected a scalar");
    return node.Scalar();
  }

  Rational Number(const YAML::Node& node, const std::string& field) const {
    try {
      return ParseRational(Scalar(node, field));
    } catch (const std::invalid_argument& e) {
      Fail(node, field, e.what());
    }
  }

  std::int64_t Integer(const YAML::Node& node, const std::string& field) const {
    const Rational r = Number(node, field);
    if (r.denominator() != 1) Fail(node, field, "expected an integer");
    return r.numerator();
  }

  bool Bool(const YAML::Node& node, const std::string& field) const {
    const std::string s = Scalar(node, field);
    if (s == "true") return true;
    if (s == "false") return false;
    Fail(node, field, "expected true or false");
  }

 private:
  std::string origin_;
};

}  // namespace

ScenarioParseError::ScenarioParseError(std::string origin, int line,
                                       std::string field,
                                       const std::string& message)
    : std::runtime_error(origin + ":" + std::to_string(line) + ": " +
                         (field.empty() ? "" : field + ": ") + message),
      origin_(std::move(origin)),
      line_(line),
      field_(std::move(field)) {}

Network ParseScenario(std::string_view text, std::string_view origin) {
  Reader r{std::string(origin)};
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ScenarioParseError(std::string(origin), e.mark.line + 1, "", e.msg);
  }
  r.RequireMap(root, "");
  r.RejectUnknown(root, "", {"scenario_version", "name", "description",
                             "destination", "nodes", "edges", "groups"});

  const YAML::Node version = r.Required(root, "scenario_version", "scenario_version");
  if (r.Integer(version, "scenario_version") != kScenarioVersion) {
    r.Fail(version, "scenario_version",
           "unsupported version (expected " + std::to_string(kScenarioVersion) + ")");
  }
  const std::string name = root["name"] ? r.Scalar(root["name"], "name") : "";
  const std::string description =
      root["description"] ? r.Scalar(root["description"], "description") : "";
  const std::string destination =
      r.Scalar(r.Required(root, "destination", "destination"), "destination");

  std::vector<NodeId> nodes;
  const YAML::Node yn = r.Required(root, "nodes", "nodes");
  if (!yn.IsSequence()) r.Fail(yn, "nodes", "expected a list");
  for (std::size_t i = 0; i < yn.size(); ++i) {
    nodes.push_back(r.Scalar(yn[i], "nodes[" + std::to_string(i) + "]"));
  }

  // Groups come first so that capacity "N" can resolve to the population.
  std::vector<GroupSpec> groups;
  const YAML::Node yg = r.Required(root, "groups", "groups");
  if (!yg.IsSequence()) r.Fail(yg, "groups", "expected a list");
  for (std::size_t i = 0; i < yg.size(); ++i) {
    const std::string f = "groups[" + std::to_string(i) + "]";
    const YAML::Node g = yg[i];
    r.RequireMap(g, f);
    r.RejectUnknown(g, f, {"name", "source", "size", "strategies"});
    GroupSpec spec;
    spec.name = r.Scalar(r.Required(g, "name", f + ".name"), f + ".name");
    spec.source = r.Scalar(r.Required(g, "source", f + ".source"), f + ".source");
    spec.size = r.Integer(r.Required(g, "size", f + ".size"), f + ".size");
    const YAML::Node ys = r.Required(g, "strategies", f + ".strategies");
    if (!ys.IsSequence()) r.Fail(ys, f + ".strategies", "expected a list");
    for (std::size_t s = 0; s < ys.size(); ++s) {
      const std::string sf = f + ".strategies[" + std::to_string(s) + "]";
      const YAML::Node st = ys[s];
      r.RequireMap(st, sf);
      r.RejectUnknown(st, sf, {"name", "path"});
      Strategy strategy;
      if (st["name"]) strategy.name = r.Scalar(st["name"], sf + ".name");
      const YAML::Node yp = r.Required(st, "path", sf + ".path");
      if (!yp.IsSequence()) r.Fail(yp, sf + ".path", "expected a list of edge ids");
      for (std::size_t k = 0; k < yp.size(); ++k) {
        strategy.path.edges.push_back(r.Scalar(yp[k], sf + ".path[" + std::to_string(k) + "]"));
      }
      spec.strategies.push_back(std::move(strategy));
    }
    groups.push_back(std::move(spec));
  }
  std::int64_t population = 0;
  for (const GroupSpec& g : groups) population += g.size;

  std::vector<Edge> edges;
  const YAML::Node ye = r.Required(root, "edges", "edges");
  if (!ye.IsSequence()) r.Fail(ye, "edges", "expected a list");
  for (std::size_t i = 0; i < ye.size(); ++i) {
    const std::string f = "edges[" + std::to_string(i) + "]";
    const YAML::Node e = ye[i];
    r.RequireMap(e, f);
    r.RejectUnknown(e, f, {"id", "src", "dst", "base", "slope", "t0", "capacity",
                           "allow_self_loop"});
    Edge edge;
    edge.id = r.Scalar(r.Required(e, "id", f + ".id"), f + ".id");
    edge.src = r.Scalar(r.Required(e, "src", f + ".src"), f + ".src");
    edge.dst = r.Scalar(r.Required(e, "dst", f + ".dst"), f + ".dst");
    if (e["allow_self_loop"]) edge.allow_self_loop = r.Bool(e["allow_self_loop"], f + ".allow_self_loop");

    const bool affine = e["base"] || e["slope"];
    const bool volume = e["t0"] || e["capacity"];
    if (affine && volume) r.Fail(e, f, "give either base/slope or t0/capacity, not both");
    if (volume) {
      VolumeDelay vd;
      vd.t0 = r.Number(r.Required(e, "t0", f + ".t0"), f + ".t0");
      const YAML::Node cap = r.Required(e, "capacity", f + ".capacity");
      if (r.Scalar(cap, f + ".capacity") == "N") {
        vd.capacity_is_population = true;
        vd.capacity = Rational(population);
      } else {
        vd.capacity = r.Number(cap, f + ".capacity");
      }
      if (vd.capacity <= 0) r.Fail(cap, f + ".capacity", "capacity must be positive");
      edge.latency = MakeVolumeDelay(vd.t0, vd.capacity);
      edge.volume_delay = vd;
    } else {
      edge.latency.base = e["base"] ? r.Number(e["base"], f + ".base") : Rational(0);
      edge.latency.slope = e["slope"] ? r.Number(e["slope"], f + ".slope") : Rational(0);
    }
    edges.push_back(std::move(edge));
  }

  return Network(std::move(nodes), std::move(edges), destination, std::move(groups),
                 name, description);
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Network LoadScenario(const std::filesystem::path& path) {
  return ParseScenario(ReadTextFile(path), path.string());
}

std::string SerializeScenario(const Network& net, std::string_view comment) {
  std::ostringstream out;
  if (!comment.empty()) {
    std::istringstream lines{std::string(comment)};
    std::string line;
    while (std::getline(lines, line)) out << (line.empty() ? "#" : "# " + line) << "\n";
  }
  YAML::Emitter y;
  y << YAML::BeginMap;
  y << YAML::Key << "scenario_version" << YAML::Value << kScenarioVersion;
  if (!net.name().empty()) y << YAML::Key << "name" << YAML::Value << net.name();
  if (!net.description().empty()) {
    y << YAML::Key << "description" << YAML::Value << net.description();
  }
  y << YAML::Key << "destination" << YAML::Value << net.destination();
  y << YAML::Key << "nodes" << YAML::Value << YAML::Flow << net.nodes();
  y << YAML::Key << "edges" << YAML::Value << YAML::BeginSeq;
  for (const Edge& e : net.edges()) {
    y << YAML::Flow << YAML::BeginMap;
    y << YAML::Key << "id" << YAML::Value << e.id;
    y << YAML::Key << "src" << YAML::Value << e.src;
    y << YAML::Key << "dst" << YAML::Value << e.dst;
    if (e.volume_delay) {
      y << YAML::Key << "t0" << YAML::Value << FormatRational(e.volume_delay->t0);
      y << YAML::Key << "capacity" << YAML::Value
        << (e.volume_delay->capacity_is_population ? std::string("N")
                                                   : FormatRational(e.volume_delay->capacity));
    } else {
      y << YAML::Key << "base" << YAML::Value << FormatRational(e.latency.base);
      y << YAML::Key << "slope" << YAML::Value << FormatRational(e.latency.slope);
    }
    if (e.allow_self_loop) y << YAML::Key << "allow_self_loop" << YAML::Value << true;
    y << YAML::EndMap;
  }
  y << YAML::EndSeq;
  y << YAML::Key << "groups" << YAML::Value << YAML::BeginSeq;
  for (const GroupSpec& g : net.groups()) {
    y << YAML::BeginMap;
    y << YAML::Key << "name" << YAML::Value << g.name;
    y << YAML::Key << "source" << YAML::Value << g.source;
    y << YAML::Key << "size" << YAML::Value << g.size;
    y << YAML::Key << "strategies" << YAML::Value << YAML::BeginSeq;
    for (const Strategy& s : g.strategies) {
      y << YAML::Flow << YAML::BeginMap;
      if (!s.name.empty()) y << YAML::Key << "name" << YAML::Value << s.name;
      y << YAML::Key << "path" << YAML::Value << YAML::Flow << s.path.edges;
      y << YAML::EndMap;
    }
    y << YAML::EndSeq;
    y << YAML::EndMap;
  }
  y << YAML::EndSeq;
  y << YAML::EndMap;
  out << y.c_str() << "\n";
  return out.str();
}

}  // namespace fairnet
