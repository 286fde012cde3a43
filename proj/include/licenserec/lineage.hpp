// SPDX-License-Identifier: Apache-2.0
//
// Supply-chain lineage graph: dataset, model and repository nodes with
// stage-tagged edges, built from JSONL metadata dumps. Everything is
// canonically ordered so identical dumps produce identical graphs no
// matter the record order.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "licenserec/catalog.hpp"
#include "licenserec/errors.hpp"
#include "licenserec/io.hpp"
#include "licenserec/spdx.hpp"
#include "licenserec/text.hpp"

namespace licenserec {

enum class ArtifactKind { Dataset, Model, Repository };

inline std::string_view kind_code(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::Dataset: return "dataset";
    case ArtifactKind::Model: return "model";
    case ArtifactKind::Repository: return "repository";
  }
  return "dataset";
}

inline std::optional<ArtifactKind> parse_kind(std::string_view code) {
  if (code == "dataset") return ArtifactKind::Dataset;
  if (code == "model") return ArtifactKind::Model;
  if (code == "repository") return ArtifactKind::Repository;
  return std::nullopt;
}

enum class Stage { DatasetToModel, ModelToRepository, DatasetToRepository };

inline constexpr std::array<Stage, 3> kAllStages = {
    Stage::DatasetToModel, Stage::ModelToRepository, Stage::DatasetToRepository};

inline std::string_view stage_code(Stage s) {
  switch (s) {
    case Stage::DatasetToModel: return "dataset-model";
    case Stage::ModelToRepository: return "model-repo";
    case Stage::DatasetToRepository: return "dataset-repo";
  }
  return "dataset-model";
}

inline std::optional<Stage> parse_stage(std::string_view code) {
  if (code == "dataset-model") return Stage::DatasetToModel;
  if (code == "model-repo") return Stage::ModelToRepository;
  if (code == "dataset-repo") return Stage::DatasetToRepository;
  return std::nullopt;
}

inline ArtifactKind stage_from_kind(Stage s) {
  return s == Stage::ModelToRepository ? ArtifactKind::Model : ArtifactKind::Dataset;
}
inline ArtifactKind stage_to_kind(Stage s) {
  return s == Stage::DatasetToModel ? ArtifactKind::Model : ArtifactKind::Repository;
}

struct LicenseEvidence {
  std::string id;      // catalog canonical id or verbatim unknown token
  std::string source;  // provenance note: tag, tag-expr, file path, ...
};

struct ArtifactNode {
  std::string id;
  ArtifactKind kind = ArtifactKind::Dataset;
  std::vector<LicenseEvidence> licenses;
  std::optional<std::uint64_t> likes;

  std::vector<std::string> license_ids() const {
    std::vector<std::string> out;
    for (const LicenseEvidence& ev : licenses) {
      bool seen = false;
      for (const std::string& s : out)
        if (iequals(s, ev.id)) { seen = true; break; }
      if (!seen) out.push_back(ev.id);
    }
    std::sort(out.begin(), out.end(), ILess{});
    return out;
  }
};

struct NodeRef {
  ArtifactKind kind = ArtifactKind::Dataset;
  std::string id;

  friend bool operator<(const NodeRef& a, const NodeRef& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.id < b.id;
  }
  friend bool operator==(const NodeRef& a, const NodeRef& b) {
    return a.kind == b.kind && a.id == b.id;
  }
};

struct LineageEdge {
  NodeRef from, to;
  Stage stage = Stage::DatasetToModel;
  bool terms_preserved = false;
  std::string evidence;
};

// name (lowercased) -> qualified ids, used to resolve bare dataset tags
using DatasetAliasTable = std::map<std::string, std::vector<std::string>>;

struct DatasetResolution {
  enum class Status { Qualified, Resolved, Unresolved };
  Status status = Status::Unresolved;
  std::string qualified;
  bool ambiguous = false;
  std::vector<std::string> candidates;
};

inline DatasetResolution resolve_dataset_id(std::string_view partial,
                                            const DatasetAliasTable& aliases) {
  DatasetResolution r;
  std::string name(trim_view(partial));
  if (name.find('/') != std::string::npos) {
    r.status = DatasetResolution::Status::Qualified;
    r.qualified = name;
    return r;
  }
  auto it = aliases.find(lower_copy(name));
  if (it == aliases.end() || it->second.empty()) return r;
  r.candidates = it->second;
  if (it->second.size() > 1) {
    r.ambiguous = true;
    return r;
  }
  r.status = DatasetResolution::Status::Resolved;
  r.qualified = it->second.front();
  return r;
}

class LineageGraph {
 public:
  const std::map<std::string, ArtifactNode>& nodes(ArtifactKind k) const {
    return nodes_[static_cast<std::size_t>(k)];
  }

  const ArtifactNode* find_node(const NodeRef& ref) const {
    const auto& bucket = nodes(ref.kind);
    auto it = bucket.find(ref.id);
    return it == bucket.end() ? nullptr : &it->second;
  }

  // Upsert; license evidence from duplicate records merges order-independently.
  ArtifactNode& add_node(ArtifactNode node) {
    auto& bucket = nodes_[static_cast<std::size_t>(node.kind)];
    auto [it, inserted] = bucket.try_emplace(node.id, node);
    if (!inserted) {
      ArtifactNode& existing = it->second;
      for (LicenseEvidence& ev : node.licenses) existing.licenses.push_back(std::move(ev));
      if (node.likes && (!existing.likes || *node.likes > *existing.likes))
        existing.likes = node.likes;
      sort_licenses(existing);
    } else {
      sort_licenses(it->second);
    }
    return it->second;
  }

  // Deduplicated on (from, to, stage); on a duplicate the smallest evidence
  // string wins and terms_preserved accumulates, keeping merges
  // insertion-order independent.
  bool add_edge(LineageEdge edge) {
    auto key = std::make_tuple(edge.stage, edge.from, edge.to);
    auto [it, inserted] = edge_index_.try_emplace(key, edges_.size());
    if (!inserted) {
      LineageEdge& existing = edges_[it->second];
      if (!edge.evidence.empty() &&
          (existing.evidence.empty() || edge.evidence < existing.evidence))
        existing.evidence = std::move(edge.evidence);
      existing.terms_preserved = existing.terms_preserved || edge.terms_preserved;
      return false;
    }
    edges_.push_back(std::move(edge));
    return true;
  }

  const std::vector<LineageEdge>& edges() const { return edges_; }

  std::vector<const LineageEdge*> edges(Stage stage) const {
    std::vector<const LineageEdge*> out;
    for (const LineageEdge& e : edges_)
      if (e.stage == stage) out.push_back(&e);
    return out;
  }

  std::vector<const LineageEdge*> in_edges(const NodeRef& to) const {
    std::vector<const LineageEdge*> out;
    for (const LineageEdge& e : edges_)
      if (e.to == to) out.push_back(&e);
    return out;
  }

  DatasetAliasTable& alias_table() { return aliases_; }
  const DatasetAliasTable& alias_table() const { return aliases_; }

  void canonicalize() {
    std::sort(edges_.begin(), edges_.end(), [](const LineageEdge& a, const LineageEdge& b) {
      return std::tie(a.stage, a.from, a.to) < std::tie(b.stage, b.from, b.to);
    });
    edge_index_.clear();
    for (std::size_t i = 0; i < edges_.size(); ++i)
      edge_index_[{edges_[i].stage, edges_[i].from, edges_[i].to}] = i;
  }

  void save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    for (ArtifactKind kind :
         {ArtifactKind::Dataset, ArtifactKind::Model, ArtifactKind::Repository}) {
      std::ostringstream out;
      for (const auto& [id, node] : nodes(kind)) out << node_to_json(node).dump() << '\n';
      write_text_file(dir / (std::string("nodes-") + std::string(kind_code(kind)) + ".jsonl"),
                      out.str());
    }
    std::ostringstream out;
    for (const LineageEdge& e : edges_) out << edge_to_json(e).dump() << '\n';
    write_text_file(dir / "edges.jsonl", out.str());
  }

  static LineageGraph load(const std::filesystem::path& dir) {
    LineageGraph g;
    for (ArtifactKind kind :
         {ArtifactKind::Dataset, ArtifactKind::Model, ArtifactKind::Repository}) {
      auto path = dir / (std::string("nodes-") + std::string(kind_code(kind)) + ".jsonl");
      std::ifstream in(path);
      if (!in) throw IoError("cannot open graph file: " + path.string());
      for_each_jsonl(in, path.string(), [&](const nlohmann::json& rec, std::size_t) {
        g.add_node(node_from_json(rec, path.string()));
      });
    }
    auto epath = dir / "edges.jsonl";
    std::ifstream ein(epath);
    if (!ein) throw IoError("cannot open graph file: " + epath.string());
    for_each_jsonl(ein, epath.string(), [&](const nlohmann::json& rec, std::size_t) {
      g.add_edge(edge_from_json(rec, epath.string()));
    });
    g.validate_endpoints();
    g.canonicalize();
    return g;
  }

  static nlohmann::json node_to_json(const ArtifactNode& node) {
    nlohmann::json j;
    j["id"] = node.id;
    j["kind"] = std::string(kind_code(node.kind));
    auto lics = nlohmann::json::array();
    for (const LicenseEvidence& ev : node.licenses)
      lics.push_back({{"id", ev.id}, {"source", ev.source}});
    j["licenses"] = lics;
    if (node.likes) j["likes"] = *node.likes;
    return j;
  }

  static nlohmann::json edge_to_json(const LineageEdge& e) {
    nlohmann::json j;
    j["evidence"] = e.evidence;
    j["from"] = {{"id", e.from.id}, {"kind", std::string(kind_code(e.from.kind))}};
    j["stage"] = std::string(stage_code(e.stage));
    j["terms_preserved"] = e.terms_preserved;
    j["to"] = {{"id", e.to.id}, {"kind", std::string(kind_code(e.to.kind))}};
    return j;
  }

 private:
  static void sort_licenses(ArtifactNode& node) {
    std::sort(node.licenses.begin(), node.licenses.end(),
              [](const LicenseEvidence& a, const LicenseEvidence& b) {
                if (!iequals(a.id, b.id)) return ILess{}(a.id, b.id);
                return a.source < b.source;
              });
    node.licenses.erase(std::unique(node.licenses.begin(), node.licenses.end(),
                                    [](const LicenseEvidence& a, const LicenseEvidence& b) {
                                      return iequals(a.id, b.id) && a.source == b.source;
                                    }),
                        node.licenses.end());
  }

  static ArtifactNode node_from_json(const nlohmann::json& rec, const std::string& label) {
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("kind"))
      throw SchemaError(label + ": node records need 'id' and 'kind'");
    ArtifactNode node;
    node.id = rec["id"].get<std::string>();
    auto kind = parse_kind(rec["kind"].get<std::string>());
    if (!kind) throw SchemaError(label + ": unknown node kind '" + rec["kind"].get<std::string>() + "'");
    node.kind = *kind;
    if (rec.contains("licenses"))
      for (const auto& ev : rec["licenses"])
        node.licenses.push_back({ev.at("id").get<std::string>(),
                                 ev.value("source", std::string())});
    if (rec.contains("likes")) node.likes = rec["likes"].get<std::uint64_t>();
    return node;
  }

  static LineageEdge edge_from_json(const nlohmann::json& rec, const std::string& label) {
    if (!rec.is_object() || !rec.contains("from") || !rec.contains("to") ||
        !rec.contains("stage"))
      throw SchemaError(label + ": edge records need 'from', 'to' and 'stage'");
    LineageEdge e;
    auto ref = [&](const nlohmann::json& r) {
      auto kind = parse_kind(r.at("kind").get<std::string>());
      if (!kind) throw SchemaError(label + ": unknown edge endpoint kind");
      return NodeRef{*kind, r.at("id").get<std::string>()};
    };
    e.from = ref(rec["from"]);
    e.to = ref(rec["to"]);
    auto stage = parse_stage(rec["stage"].get<std::string>());
    if (!stage) throw SchemaError(label + ": unknown stage '" + rec["stage"].get<std::string>() + "'");
    e.stage = *stage;
    if (e.from.kind != stage_from_kind(e.stage) || e.to.kind != stage_to_kind(e.stage))
      throw SchemaError(label + ": edge endpoints disagree with stage " +
                        std::string(stage_code(e.stage)));
    e.terms_preserved = rec.value("terms_preserved", false);
    e.evidence = rec.value("evidence", std::string());
    return e;
  }

  void validate_endpoints() const {
    for (const LineageEdge& e : edges_) {
      if (!find_node(e.from) || !find_node(e.to))
        throw SchemaError("dangling edge endpoint: " + e.from.id + " -> " + e.to.id);
    }
  }

  std::array<std::map<std::string, ArtifactNode>, 3> nodes_;
  std::vector<LineageEdge> edges_;
  std::map<std::tuple<Stage, NodeRef, NodeRef>, std::size_t> edge_index_;
  DatasetAliasTable aliases_;
};

struct IngestStats {
  std::map<std::string, std::uint64_t> nodes_per_kind;
  std::map<std::string, std::uint64_t> edges_per_stage;
  std::map<std::string, std::uint64_t> unknown_license_evidence;
  std::map<std::string, std::uint64_t> unlicensed_nodes;
  std::uint64_t quarantined = 0;

  nlohmann::json to_json() const {
    return {{"edges_per_stage", edges_per_stage},
            {"nodes_per_kind", nodes_per_kind},
            {"quarantined", quarantined},
            {"unknown_license_evidence", unknown_license_evidence},
            {"unlicensed_nodes", unlicensed_nodes}};
  }
};

struct QuarantinedRecord {
  std::string kind;    // record kind that referenced the missing artifact
  std::string record;  // referencing record id
  std::string target;  // unresolved or missing reference
  std::string reason;

  nlohmann::json to_json() const {
    return {{"kind", kind}, {"reason", reason}, {"record", record}, {"target", target}};
  }
};

struct IngestOptions {
  bool likes_filter = false;           // keep only models above the threshold
  std::uint64_t likes_threshold = 20;  // strictly greater than
};

struct IngestResult {
  LineageGraph graph;
  IngestStats stats;
  std::vector<QuarantinedRecord> quarantine;
};

namespace detail {

// Tags are usually single identifiers but occasionally whole SPDX
// expressions; expression tags flatten to one evidence entry per leaf.
inline std::vector<LicenseEvidence> normalize_tag(const Catalog& catalog, std::string_view raw,
                                                  const std::string& source) {
  std::vector<LicenseEvidence> out;
  std::string_view trimmed = trim_view(raw);
  if (trimmed.empty()) return out;
  bool looks_compound = trimmed.find('(') != std::string_view::npos;
  if (!looks_compound) {
    std::string low = lower_copy(trimmed);
    looks_compound = low.find(" or ") != std::string::npos ||
                     low.find(" and ") != std::string::npos ||
                     low.find(" with ") != std::string::npos;
  }
  if (looks_compound) {
    try {
      spdx::Expression expr = spdx::parse(trimmed);
      auto walk = [&](auto&& self, const spdx::Expression& node) -> void {
        if (node.kind == spdx::NodeKind::Leaf) {
          out.push_back({catalog.normalize_license_tag(spdx::lookup_token(node)),
                         source + "-expr"});
          return;
        }
        for (const auto& c : node.children) self(self, c);
      };
      walk(walk, expr);
      return out;
    } catch (const SyntaxError&) {
      // fall through: treat the whole tag as one opaque license string
    }
  }
  out.push_back({catalog.normalize_license_tag(trimmed), source});
  return out;
}

inline std::vector<std::string> string_list(const nlohmann::json& rec, const char* key,
                                            const std::string& label, std::size_t lineno) {
  std::vector<std::string> out;
  if (!rec.contains(key)) return out;
  if (!rec[key].is_array())
    throw SchemaError(label + " record " + std::to_string(lineno) + ": '" + key +
                      "' must be an array");
  for (const auto& v : rec[key]) {
    if (!v.is_string())
      throw SchemaError(label + " record " + std::to_string(lineno) + ": '" + key +
                        "' entries must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace detail

inline DatasetAliasTable load_alias_table(std::istream& in, const std::string& label) {
  DatasetAliasTable table;
  for_each_jsonl(in, label, [&](const nlohmann::json& rec, std::size_t lineno) {
    if (!rec.contains("name") || !rec.contains("qualified"))
      throw SchemaError(label + " record " + std::to_string(lineno) +
                        ": alias entries need 'name' and 'qualified'");
    auto& bucket = table[lower_copy(rec["name"].get<std::string>())];
    std::string qualified = rec["qualified"].get<std::string>();
    if (std::find(bucket.begin(), bucket.end(), qualified) == bucket.end())
      bucket.push_back(std::move(qualified));
  });
  for (auto& [name, ids] : table) std::sort(ids.begin(), ids.end());
  return table;
}

inline IngestResult ingest_records(const Catalog& catalog, std::istream& datasets,
                                   std::istream& models, std::istream& repos,
                                   DatasetAliasTable aliases = {},
                                   const IngestOptions& opts = {}) {
  IngestResult result;
  LineageGraph& g = result.graph;
  g.alias_table() = std::move(aliases);

  auto count_unknown = [&](const ArtifactNode& node) {
    const std::string kind(kind_code(node.kind));
    if (node.licenses.empty()) result.stats.unlicensed_nodes[kind] += 1;
    for (const LicenseEvidence& ev : node.licenses)
      if (!catalog.is_known(ev.id)) result.stats.unknown_license_evidence[kind] += 1;
  };

  for_each_jsonl(datasets, "dataset dump", [&](const nlohmann::json& rec, std::size_t lineno) {
    if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string())
      throw SchemaError("dataset dump record " + std::to_string(lineno) + ": missing 'id'");
    ArtifactNode node;
    node.id = rec["id"].get<std::string>();
    node.kind = ArtifactKind::Dataset;
    for (const std::string& tag : detail::string_list(rec, "license_tags", "dataset", lineno))
      for (LicenseEvidence& ev : detail::normalize_tag(catalog, tag, "tag"))
        node.licenses.push_back(std::move(ev));
    if (rec.contains("likes")) node.likes = rec["likes"].get<std::uint64_t>();
    count_unknown(g.add_node(std::move(node)));
  });

  for_each_jsonl(models, "model dump", [&](const nlohmann::json& rec, std::size_t lineno) {
    if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string())
      throw SchemaError("model dump record " + std::to_string(lineno) + ": missing 'id'");
    std::optional<std::uint64_t> likes;
    if (rec.contains("likes")) likes = rec["likes"].get<std::uint64_t>();
    if (opts.likes_filter && (!likes || *likes <= opts.likes_threshold)) return;
    ArtifactNode node;
    node.id = rec["id"].get<std::string>();
    node.kind = ArtifactKind::Model;
    node.likes = likes;
    for (const std::string& tag : detail::string_list(rec, "license_tags", "model", lineno))
      for (LicenseEvidence& ev : detail::normalize_tag(catalog, tag, "tag"))
        node.licenses.push_back(std::move(ev));
    const ArtifactNode& stored = g.add_node(std::move(node));
    count_unknown(stored);
    for (const std::string& tag : detail::string_list(rec, "dataset_tags", "model", lineno)) {
      DatasetResolution res = resolve_dataset_id(tag, g.alias_table());
      if (res.status == DatasetResolution::Status::Unresolved) {
        result.quarantine.push_back({"model", stored.id, tag,
                                     res.ambiguous ? "ambiguous_dataset" : "unresolved_dataset"});
        continue;
      }
      NodeRef from{ArtifactKind::Dataset, res.qualified};
      if (!g.find_node(from)) {
        result.quarantine.push_back({"model", stored.id, res.qualified, "dangling_dataset"});
        continue;
      }
      g.add_edge({from, {ArtifactKind::Model, stored.id}, Stage::DatasetToModel, false,
                  "tag:" + std::string(trim_view(tag))});
    }
  });

  for_each_jsonl(repos, "repo dump", [&](const nlohmann::json& rec, std::size_t lineno) {
    if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string())
      throw SchemaError("repo dump record " + std::to_string(lineno) + ": missing 'id'");
    ArtifactNode node;
    node.id = rec["id"].get<std::string>();
    node.kind = ArtifactKind::Repository;
    if (rec.contains("detected_licenses")) {
      if (!rec["detected_licenses"].is_array())
        throw SchemaError("repo dump record " + std::to_string(lineno) +
                          ": 'detected_licenses' must be an array");
      for (const auto& det : rec["detected_licenses"]) {
        if (!det.is_object() || !det.contains("spdx"))
          throw SchemaError("repo dump record " + std::to_string(lineno) +
                            ": detections need 'spdx'");
        for (LicenseEvidence& ev : detail::normalize_tag(
                 catalog, det["spdx"].get<std::string>(), det.value("source_file", "scan")))
          node.licenses.push_back(std::move(ev));
      }
    }
    const ArtifactNode& stored = g.add_node(std::move(node));
    count_unknown(stored);
    if (rec.contains("model_matches")) {
      if (!rec["model_matches"].is_array())
        throw SchemaError("repo dump record " + std::to_string(lineno) +
                          ": 'model_matches' must be an array");
      for (const auto& match : rec["model_matches"]) {
        if (!match.is_object() || !match.contains("model_id"))
          throw SchemaError("repo dump record " + std::to_string(lineno) +
                            ": matches need 'model_id'");
        std::string model_id = match["model_id"].get<std::string>();
        NodeRef from{ArtifactKind::Model, model_id};
        if (!g.find_node(from)) {
          result.quarantine.push_back({"repo", stored.id, model_id, "dangling_model"});
          continue;
        }
        g.add_edge({from, {ArtifactKind::Repository, stored.id}, Stage::ModelToRepository, false,
                    "code:" + match.value("file", std::string()) + "#" +
                        match.value("signature_id", std::string())});
      }
    }
  });

  g.canonicalize();
  std::sort(result.quarantine.begin(), result.quarantine.end(),
            [](const QuarantinedRecord& a, const QuarantinedRecord& b) {
              return std::tie(a.kind, a.record, a.target, a.reason) <
                     std::tie(b.kind, b.record, b.target, b.reason);
            });
  result.stats.quarantined = result.quarantine.size();
  for (ArtifactKind kind :
       {ArtifactKind::Dataset, ArtifactKind::Model, ArtifactKind::Repository})
    result.stats.nodes_per_kind[std::string(kind_code(kind))] = g.nodes(kind).size();
  for (Stage stage : kAllStages)
    result.stats.edges_per_stage[std::string(stage_code(stage))] = g.edges(stage).size();
  return result;
}

// Adds one dataset->repository edge per (dataset, repo) pair connected
// through at least one model; evidence lists the connecting models.
inline std::size_t close_dataset_to_repo(LineageGraph& g) {
  std::map<std::string, std::vector<std::string>> datasets_of_model, repos_of_model;
  for (const LineageEdge& e : g.edges()) {
    if (e.stage == Stage::DatasetToModel)
      datasets_of_model[e.to.id].push_back(e.from.id);
    else if (e.stage == Stage::ModelToRepository)
      repos_of_model[e.from.id].push_back(e.to.id);
  }
  std::map<std::pair<std::string, std::string>, std::set<std::string>> pairs;
  for (const auto& [model, datasets] : datasets_of_model) {
    auto rit = repos_of_model.find(model);
    if (rit == repos_of_model.end()) continue;
    for (const std::string& d : datasets)
      for (const std::string& r : rit->second) pairs[{d, r}].insert(model);
  }
  std::size_t added = 0;
  for (const auto& [pair, models] : pairs) {
    std::vector<std::string> sorted(models.begin(), models.end());
    if (g.add_edge({{ArtifactKind::Dataset, pair.first},
                    {ArtifactKind::Repository, pair.second},
                    Stage::DatasetToRepository,
                    false,
                    "models:" + join(sorted, ",")}))
      ++added;
  }
  g.canonicalize();
  return added;
}

}  // namespace licenserec
