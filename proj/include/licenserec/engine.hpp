// SPDX-License-Identifier: Apache-2.0
//
// Violation detection on lineage edges, compliant-license recommendation
// and fixability accounting.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "licenserec/catalog.hpp"
#include "licenserec/lineage.hpp"
#include "licenserec/matrix.hpp"
#include "licenserec/text.hpp"

namespace licenserec {

enum class EdgeOverall { Compliant, Violation, Unknown };

inline std::string_view overall_code(EdgeOverall o) {
  switch (o) {
    case EdgeOverall::Compliant: return "compliant";
    case EdgeOverall::Violation: return "violation";
    case EdgeOverall::Unknown: return "unknown";
  }
  return "unknown";
}

struct PairVerdict {
  std::string upstream, downstream;
  Verdict verdict;
};

struct EdgeAssessment {
  LineageEdge edge;
  std::vector<PairVerdict> pairs;  // canonical (upstream, downstream) order
  EdgeOverall overall = EdgeOverall::Unknown;
};

// Edge aggregation: Unknown when every pair is Unknown (including empty
// evidence on either side); otherwise the edge is compliant when at least
// one downstream license is compatible with every upstream license, and a
// violation when an incompatible pair exists without such a license.
inline EdgeAssessment check_edge(const LineageEdge& edge, const LineageGraph& graph,
                                 const CompatibilityMatrix& matrix, const Catalog& catalog) {
  EdgeAssessment a;
  a.edge = edge;
  const ArtifactNode* from = graph.find_node(edge.from);
  const ArtifactNode* to = graph.find_node(edge.to);
  std::vector<std::string> ups = from ? from->license_ids() : std::vector<std::string>{};
  std::vector<std::string> downs = to ? to->license_ids() : std::vector<std::string>{};
  EdgeContext ctx{edge.terms_preserved};

  bool any_incompatible = false, all_unknown = true, some_full_basis = false;
  for (const std::string& d : downs) {
    bool compatible_with_all = !ups.empty();
    for (const std::string& u : ups) {
      Verdict v = verdict(matrix, catalog, u, d, ctx);
      a.pairs.push_back({u, d, v});
      if (v.kind != VerdictKind::Unknown) all_unknown = false;
      if (v.kind == VerdictKind::Incompatible) any_incompatible = true;
      if (v.kind != VerdictKind::Compatible) compatible_with_all = false;
    }
    if (compatible_with_all) some_full_basis = true;
  }
  // canonical pair order: upstream-major (pairs were built downstream-major)
  std::sort(a.pairs.begin(), a.pairs.end(), [](const PairVerdict& x, const PairVerdict& y) {
    if (!iequals(x.upstream, y.upstream)) return ILess{}(x.upstream, y.upstream);
    return ILess{}(x.downstream, y.downstream);
  });

  if (a.pairs.empty() || all_unknown)
    a.overall = EdgeOverall::Unknown;
  else if (any_incompatible && !some_full_basis)
    a.overall = EdgeOverall::Violation;
  else
    a.overall = EdgeOverall::Compliant;
  return a;
}

struct ViolationReport {
  Stage stage = Stage::DatasetToModel;
  std::uint64_t evaluated = 0;   // edges with a known ruling on both sides
  std::uint64_t violations = 0;
  std::uint64_t unknowns = 0;    // excluded from the denominator
  std::optional<double> violation_rate;  // violations / evaluated
  std::vector<EdgeAssessment> assessments;
};

inline ViolationReport detect_conflicts(const LineageGraph& graph, Stage stage,
                                        const CompatibilityMatrix& matrix,
                                        const Catalog& catalog) {
  ViolationReport report;
  report.stage = stage;
  for (const LineageEdge* edge : graph.edges(stage)) {
    EdgeAssessment a = check_edge(*edge, graph, matrix, catalog);
    switch (a.overall) {
      case EdgeOverall::Unknown: ++report.unknowns; break;
      case EdgeOverall::Violation:
        ++report.evaluated;
        ++report.violations;
        break;
      case EdgeOverall::Compliant: ++report.evaluated; break;
    }
    report.assessments.push_back(std::move(a));
  }
  if (report.evaluated > 0)
    report.violation_rate =
        static_cast<double>(report.violations) / static_cast<double>(report.evaluated);
  return report;
}

struct RecommendOptions {
  std::optional<std::set<std::string, ILess>> whitelist;  // defaults to catalog flags
  EdgeContext ctx;
  std::size_t per_category_limit = 5;
};

struct Exclusion {
  std::string id, reason;
};

struct RecommendationList {
  bool resolvable = false;
  // category code -> ranked ids (weight desc, id asc), at most the limit
  std::map<std::string, std::vector<std::string>> categories;
  std::vector<Exclusion> excluded;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& [cat, ids] : categories) n += ids.size();
    return n;
  }
};

// Intersects the compatibility sets of every upstream license, then
// whitelist-filters, drops Creative Commons variants superseded by a 4.0
// in the same family, ranks by real-world frequency and cuts to five per
// category. An empty upstream set means "pick freely": the whole whitelist.
inline RecommendationList recommend(const Catalog& catalog, const CompatibilityMatrix& matrix,
                                    const std::vector<std::string>& upstream,
                                    const RecommendOptions& opts = {}) {
  RecommendationList out;
  std::set<std::string, ILess> survivors;
  if (upstream.empty()) {
    for (const CatalogEntry& e : catalog.entries()) survivors.insert(e.id);
  } else {
    bool first = true;
    for (const std::string& u : upstream) {
      CompatibleSet cs = compatible_set(matrix, catalog, u, opts.ctx);
      std::set<std::string, ILess> ids(cs.ids.begin(), cs.ids.end());
      if (first) {
        survivors = std::move(ids);
        first = false;
      } else {
        std::set<std::string, ILess> merged;
        for (const std::string& id : survivors)
          if (ids.count(id)) merged.insert(id);
        survivors = std::move(merged);
      }
      if (survivors.empty()) break;
    }
  }
  if (survivors.empty()) return out;  // fundamental conflict: stop here
  out.resolvable = true;

  const std::set<std::string, ILess> whitelist =
      opts.whitelist ? *opts.whitelist : catalog.default_whitelist();
  std::vector<const CatalogEntry*> kept;
  for (const std::string& id : survivors) {
    const CatalogEntry* e = catalog.find(id);
    if (!e) continue;
    if (!whitelist.count(e->id)) {
      out.excluded.push_back({e->id, "not_whitelisted"});
      continue;
    }
    kept.push_back(e);
  }

  // CC dedup: a 4.0 variant in the running set supersedes older versions
  std::set<std::string> families_with_40;
  for (const CatalogEntry* e : kept)
    if (e->cc_family && e->cc_family->version == "4.0")
      families_with_40.insert(e->cc_family->family);
  std::vector<const CatalogEntry*> deduped;
  for (const CatalogEntry* e : kept) {
    if (e->cc_family && families_with_40.count(e->cc_family->family) &&
        e->cc_family->version != "4.0") {
      out.excluded.push_back({e->id, "older_cc_variant"});
      continue;
    }
    deduped.push_back(e);
  }

  std::map<std::string, std::vector<const CatalogEntry*>> per_category;
  for (const CatalogEntry* e : deduped)
    per_category[std::string(category_code(e->category))].push_back(e);
  for (auto& [cat, entries] : per_category) {
    std::sort(entries.begin(), entries.end(), [](const CatalogEntry* a, const CatalogEntry* b) {
      if (a->frequency_weight != b->frequency_weight)
        return a->frequency_weight > b->frequency_weight;
      return ILess{}(a->id, b->id);
    });
    std::vector<std::string>& ids = out.categories[cat];
    for (const CatalogEntry* e : entries) {
      if (ids.size() < opts.per_category_limit)
        ids.push_back(e->id);
      else
        out.excluded.push_back({e->id, "rank_cutoff"});
    }
  }
  std::sort(out.excluded.begin(), out.excluded.end(), [](const Exclusion& a, const Exclusion& b) {
    if (a.id != b.id) return ILess{}(a.id, b.id);
    return a.reason < b.reason;
  });
  return out;
}

struct FixabilityReport {
  std::uint64_t total_violations = 0;
  std::uint64_t fixable = 0;
  std::uint64_t unresolvable = 0;
  std::optional<double> fixability_pct;
};

// A violation is fixable when re-licensing the downstream artifact alone
// can satisfy its full upstream license set (gathered from every in-edge,
// not just the violated one).
inline FixabilityReport fixability(const ViolationReport& report, const LineageGraph& graph,
                                   const CompatibilityMatrix& matrix, const Catalog& catalog,
                                   const RecommendOptions& opts = {}) {
  FixabilityReport out;
  std::map<NodeRef, bool> memo;
  for (const EdgeAssessment& a : report.assessments) {
    if (a.overall != EdgeOverall::Violation) continue;
    ++out.total_violations;
    auto it = memo.find(a.edge.to);
    if (it == memo.end()) {
      std::set<std::string, ILess> upstream_set;
      for (const LineageEdge* in : graph.in_edges(a.edge.to))
        if (const ArtifactNode* node = graph.find_node(in->from))
          for (const std::string& id : node->license_ids()) upstream_set.insert(id);
      RecommendationList rec = recommend(
          catalog, matrix, {upstream_set.begin(), upstream_set.end()}, opts);
      it = memo.emplace(a.edge.to, rec.resolvable && rec.total() > 0).first;
    }
    if (it->second)
      ++out.fixable;
    else
      ++out.unresolvable;
  }
  if (out.total_violations > 0)
    out.fixability_pct = static_cast<double>(out.fixable) /
                         static_cast<double>(out.total_violations) * 100.0;
  return out;
}

// --- JSON renderings -------------------------------------------------------

inline nlohmann::json verdict_to_json(const Verdict& v) {
  return {{"kind", std::string(verdict_kind_code(v.kind))},
          {"reason", v.reason},
          {"source", std::string(verdict_source_code(v.source))}};
}

inline nlohmann::json assessment_to_json(const EdgeAssessment& a) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const PairVerdict& p : a.pairs)
    pairs.push_back({{"downstream", p.downstream},
                     {"upstream", p.upstream},
                     {"verdict", verdict_to_json(p.verdict)}});
  return {{"edge", LineageGraph::edge_to_json(a.edge)},
          {"overall", std::string(overall_code(a.overall))},
          {"pairs", pairs}};
}

inline nlohmann::json report_to_json(const ViolationReport& r, bool include_assessments = true) {
  nlohmann::json j;
  j["stage"] = std::string(stage_code(r.stage));
  j["evaluated"] = r.evaluated;
  j["violations"] = r.violations;
  j["unknowns"] = r.unknowns;
  if (r.violation_rate) {
    j["violation_rate"] = round_half_up(*r.violation_rate, 3);
    j["violation_rate_pct"] = round_half_up(*r.violation_rate * 100.0, 1);
  } else {
    j["violation_rate"] = nullptr;
    j["violation_rate_pct"] = nullptr;
  }
  if (include_assessments) {
    nlohmann::json arr = nlohmann::json::array();
    for (const EdgeAssessment& a : r.assessments) arr.push_back(assessment_to_json(a));
    j["assessments"] = arr;
  }
  return j;
}

inline nlohmann::json recommendation_to_json(const RecommendationList& r) {
  nlohmann::json cats = nlohmann::json::object();
  for (const auto& [cat, ids] : r.categories) cats[cat] = ids;
  nlohmann::json excluded = nlohmann::json::array();
  for (const Exclusion& e : r.excluded) excluded.push_back({{"id", e.id}, {"reason", e.reason}});
  return {{"categories", cats}, {"excluded", excluded}, {"resolvable", r.resolvable}};
}

inline nlohmann::json fixability_to_json(const FixabilityReport& f) {
  nlohmann::json j;
  j["total_violations"] = f.total_violations;
  j["fixable"] = f.fixable;
  j["unresolvable"] = f.unresolvable;
  if (f.fixability_pct)
    j["fixability_pct"] = round_half_up(*f.fixability_pct, 1);
  else
    j["fixability_pct"] = nullptr;
  return j;
}

}  // namespace licenserec
