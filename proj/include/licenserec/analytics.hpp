// SPDX-License-Identifier: Apache-2.0
//
// Empirical aggregates over a lineage graph: category transition matrices
// with retention rates, ranked violation patterns, per-kind category
// distributions and side-by-side matrix comparisons.
#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "licenserec/catalog.hpp"
#include "licenserec/engine.hpp"
#include "licenserec/io.hpp"
#include "licenserec/lineage.hpp"
#include "licenserec/matrix.hpp"

namespace licenserec {

enum class TransitionCounting {
  BestCase,  // one cell per link: best-compatible downstream license
  PerPair,   // one cell per (upstream license, downstream license) pair
};

struct TransitionMatrix {
  Stage stage = Stage::DatasetToModel;
  // counts[upstream category][downstream category], UNKNOWN included
  std::array<std::array<std::uint64_t, 10>, 10> counts{};
  std::map<std::string, double> retention;  // category code -> diagonal share %

  std::uint64_t cell(Category u, Category d) const {
    return counts[static_cast<std::size_t>(u)][static_cast<std::size_t>(d)];
  }
  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& row : counts)
      for (std::uint64_t c : row) t += c;
    return t;
  }
};

namespace detail {

inline Category representative_upstream(const std::vector<std::string>& ids,
                                        const Catalog& catalog) {
  for (const std::string& id : ids) {  // ids arrive sorted; prefer a known one
    Category c = catalog.categorize(id);
    if (c != Category::Unknown) return c;
  }
  return Category::Unknown;
}

// Best-case downstream license: compatible with every upstream license if
// possible, otherwise fewest incompatible pairs; ties break on id.
inline Category best_case_downstream(const std::vector<std::string>& ups,
                                     const std::vector<std::string>& downs,
                                     const CompatibilityMatrix& matrix, const Catalog& catalog,
                                     const EdgeContext& ctx) {
  if (downs.empty()) return Category::Unknown;
  std::string best;
  int best_full = -1;
  std::size_t best_bad = 0;
  for (const std::string& d : downs) {
    int full = 1;
    std::size_t bad = 0;
    for (const std::string& u : ups) {
      VerdictKind k = verdict(matrix, catalog, u, d, ctx).kind;
      if (k != VerdictKind::Compatible) full = 0;
      if (k == VerdictKind::Incompatible) ++bad;
    }
    if (best.empty() || full > best_full || (full == best_full && bad < best_bad)) {
      best = d;
      best_full = full;
      best_bad = bad;
    }
  }
  return catalog.categorize(best);
}

}  // namespace detail

inline TransitionMatrix transition_matrix(const LineageGraph& graph, Stage stage,
                                          const CompatibilityMatrix& matrix,
                                          const Catalog& catalog,
                                          TransitionCounting counting = TransitionCounting::BestCase) {
  TransitionMatrix tm;
  tm.stage = stage;
  for (const LineageEdge* edge : graph.edges(stage)) {
    const ArtifactNode* from = graph.find_node(edge->from);
    const ArtifactNode* to = graph.find_node(edge->to);
    std::vector<std::string> ups = from ? from->license_ids() : std::vector<std::string>{};
    std::vector<std::string> downs = to ? to->license_ids() : std::vector<std::string>{};
    EdgeContext ctx{edge->terms_preserved};
    if (counting == TransitionCounting::PerPair && !ups.empty() && !downs.empty()) {
      for (const std::string& u : ups)
        for (const std::string& d : downs)
          ++tm.counts[static_cast<std::size_t>(catalog.categorize(u))]
                     [static_cast<std::size_t>(catalog.categorize(d))];
      continue;
    }
    Category ucat = detail::representative_upstream(ups, catalog);
    Category dcat = detail::best_case_downstream(ups, downs, matrix, catalog, ctx);
    ++tm.counts[static_cast<std::size_t>(ucat)][static_cast<std::size_t>(dcat)];
  }
  for (Category c : kAllCategories) {
    std::uint64_t row = 0;
    for (Category d : kAllCategories) row += tm.cell(c, d);
    if (row > 0)
      tm.retention[std::string(category_code(c))] =
          static_cast<double>(tm.cell(c, c)) / static_cast<double>(row) * 100.0;
  }
  return tm;
}

struct ViolationPatternRow {
  Category upstream = Category::Unknown;
  Category downstream = Category::Unknown;
  std::uint64_t count = 0;
  double pct = 0;  // share of the stage's violations
};

struct ViolationPatternTable {
  std::vector<ViolationPatternRow> rows;  // count descending
  std::uint64_t violations = 0;
  std::uint64_t evaluated = 0;
  std::optional<double> rate;
};

// Each violating edge contributes once, attributed to the category pair of
// its first incompatible pair in canonical order.
inline ViolationPatternTable violation_patterns(const ViolationReport& report,
                                                const Catalog& catalog) {
  ViolationPatternTable table;
  table.violations = report.violations;
  table.evaluated = report.evaluated;
  table.rate = report.violation_rate;
  std::map<std::pair<std::string, std::string>, ViolationPatternRow> cells;
  for (const EdgeAssessment& a : report.assessments) {
    if (a.overall != EdgeOverall::Violation) continue;
    for (const PairVerdict& p : a.pairs) {
      if (p.verdict.kind != VerdictKind::Incompatible) continue;
      Category u = catalog.categorize(p.upstream);
      Category d = catalog.categorize(p.downstream);
      auto& row = cells[{std::string(category_code(u)), std::string(category_code(d))}];
      row.upstream = u;
      row.downstream = d;
      ++row.count;
      break;
    }
  }
  for (auto& [key, row] : cells) {
    if (table.violations > 0)
      row.pct = static_cast<double>(row.count) / static_cast<double>(table.violations) * 100.0;
    table.rows.push_back(row);
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ViolationPatternRow& a, const ViolationPatternRow& b) {
              if (a.count != b.count) return a.count > b.count;
              auto ka = std::make_pair(category_code(a.upstream), category_code(a.downstream));
              auto kb = std::make_pair(category_code(b.upstream), category_code(b.downstream));
              return ka < kb;
            });
  return table;
}

struct CategoryShare {
  std::uint64_t count = 0;
  double pct = 0;
};

// Occurrence-based: every license evidence entry counts once, so a
// multi-licensed repository contributes several occurrences.
inline std::map<std::string, std::map<std::string, CategoryShare>> category_distribution(
    const LineageGraph& graph, const Catalog& catalog) {
  std::map<std::string, std::map<std::string, CategoryShare>> out;
  for (ArtifactKind kind :
       {ArtifactKind::Dataset, ArtifactKind::Model, ArtifactKind::Repository}) {
    auto& shares = out[std::string(kind_code(kind))];
    std::uint64_t total = 0;
    for (const auto& [id, node] : graph.nodes(kind)) {
      for (const std::string& lic : node.license_ids()) {
        ++shares[std::string(category_code(catalog.categorize(lic)))].count;
        ++total;
      }
    }
    for (auto& [cat, share] : shares)
      share.pct = total ? static_cast<double>(share.count) / static_cast<double>(total) * 100.0
                        : 0.0;
  }
  return out;
}

struct MatrixComparisonColumn {
  std::string name;
  std::map<std::string, std::optional<double>> stage_rates;  // stage code -> rate
};

inline std::vector<MatrixComparisonColumn> compare_matrices(
    const LineageGraph& graph, const std::vector<const CompatibilityMatrix*>& matrices,
    const Catalog& catalog) {
  std::vector<MatrixComparisonColumn> out;
  for (const CompatibilityMatrix* m : matrices) {
    MatrixComparisonColumn col;
    col.name = m->name();
    for (Stage stage : kAllStages) {
      ViolationReport r = detect_conflicts(graph, stage, *m, catalog);
      col.stage_rates[std::string(stage_code(stage))] = r.violation_rate;
    }
    out.push_back(std::move(col));
  }
  return out;
}

// CSV rows (source_category, target_category, count) for non-zero cells,
// in fixed category order.
inline void export_sankey(const TransitionMatrix& tm, const std::filesystem::path& path) {
  std::string csv = "source_category,target_category,count\n";
  for (Category u : kAllCategories)
    for (Category d : kAllCategories) {
      std::uint64_t n = tm.cell(u, d);
      if (n == 0) continue;
      csv += std::string(category_code(u)) + "," + std::string(category_code(d)) + "," +
             std::to_string(n) + "\n";
    }
  write_text_file(path, csv);
}

// --- JSON renderings -------------------------------------------------------

inline nlohmann::json transition_to_json(const TransitionMatrix& tm) {
  nlohmann::json counts = nlohmann::json::object();
  for (Category u : kAllCategories) {
    nlohmann::json row = nlohmann::json::object();
    for (Category d : kAllCategories)
      if (tm.cell(u, d) > 0) row[std::string(category_code(d))] = tm.cell(u, d);
    if (!row.empty()) counts[std::string(category_code(u))] = row;
  }
  nlohmann::json retention = nlohmann::json::object();
  for (const auto& [cat, pct] : tm.retention) retention[cat] = round_half_up(pct, 1);
  return {{"counts", counts},
          {"retention_pct", retention},
          {"stage", std::string(stage_code(tm.stage))},
          {"total_links", tm.total()}};
}

inline nlohmann::json patterns_to_json(const ViolationPatternTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ViolationPatternRow& r : t.rows)
    rows.push_back({{"count", r.count},
                    {"downstream", std::string(category_code(r.downstream))},
                    {"pct", round_half_up(r.pct, 1)},
                    {"upstream", std::string(category_code(r.upstream))}});
  nlohmann::json j;
  j["rows"] = rows;
  j["violations"] = t.violations;
  j["evaluated"] = t.evaluated;
  if (t.rate) {
    j["violation_rate"] = round_half_up(*t.rate, 3);
    j["violation_rate_pct"] = round_half_up(*t.rate * 100.0, 1);
  } else {
    j["violation_rate"] = nullptr;
    j["violation_rate_pct"] = nullptr;
  }
  return j;
}

inline nlohmann::json distribution_to_json(
    const std::map<std::string, std::map<std::string, CategoryShare>>& dist) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [kind, shares] : dist) {
    nlohmann::json per_kind = nlohmann::json::object();
    std::uint64_t total = 0;
    for (const auto& [cat, share] : shares) {
      per_kind[cat] = {{"count", share.count}, {"pct", round_half_up(share.pct, 1)}};
      total += share.count;
    }
    j[kind] = {{"categories", per_kind}, {"total_occurrences", total}};
  }
  return j;
}

inline nlohmann::json comparison_to_json(const std::vector<MatrixComparisonColumn>& cols) {
  nlohmann::json arr = nlohmann::json::array();
  for (const MatrixComparisonColumn& col : cols) {
    nlohmann::json rates = nlohmann::json::object();
    for (const auto& [stage, rate] : col.stage_rates) {
      if (rate)
        rates[stage] = {{"violation_rate", round_half_up(*rate, 3)},
                        {"violation_rate_pct", round_half_up(*rate * 100.0, 1)}};
      else
        rates[stage] = {{"violation_rate", nullptr}, {"violation_rate_pct", nullptr}};
    }
    arr.push_back({{"name", col.name}, {"stages", rates}});
  }
  return arr;
}

}  // namespace licenserec
