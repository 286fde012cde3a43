// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Exit codes: 0 success/compliant, 1 violations
// found, 2 usage error, 3 data/schema error.
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "licenserec/analytics.hpp"
#include "licenserec/catalog.hpp"
#include "licenserec/engine.hpp"
#include "licenserec/errors.hpp"
#include "licenserec/io.hpp"
#include "licenserec/lineage.hpp"
#include "licenserec/matrix.hpp"
#include "licenserec/spdx.hpp"
#include "licenserec/usage_scan.hpp"

namespace licenserec::cli {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

namespace fs = std::filesystem;

struct CommonPaths {
  std::string data_dir;
  std::string catalog_file;
  std::string matrix_file;

  fs::path dir() const {
    if (!data_dir.empty()) return data_dir;
    if (const char* env = std::getenv("LICENSEREC_DATA_DIR")) return env;
#ifdef LICENSEREC_BUNDLED_DATA_DIR
    return LICENSEREC_BUNDLED_DATA_DIR;
#else
    return "data";
#endif
  }
  fs::path catalog_path() const {
    return catalog_file.empty() ? dir() / "catalog.json" : fs::path(catalog_file);
  }
  fs::path matrix_path() const {
    return matrix_file.empty() ? dir() / "matrix-licenserec-default.json"
                               : fs::path(matrix_file);
  }
  fs::path signatures_path(const std::string& flag) const {
    return flag.empty() ? dir() / "signatures.json" : fs::path(flag);
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--data-dir", data_dir, "Data directory (default: $LICENSEREC_DATA_DIR)");
    cmd->add_option("--catalog", catalog_file, "Catalog file");
    cmd->add_option("--matrix", matrix_file, "Compatibility matrix file");
  }
};

namespace detail {

enum class Tri { Yes, No, Unk };

inline Tri leaf_verdict(const CompatibilityMatrix& m, const Catalog& c,
                        const spdx::Expression& u, const spdx::Expression& d,
                        const EdgeContext& ctx) {
  Verdict v = verdict(m, c, spdx::lookup_token(u), spdx::lookup_token(d), ctx);
  if (v.kind == VerdictKind::Compatible) return Tri::Yes;
  if (v.kind == VerdictKind::Unknown) return Tri::Unk;
  return Tri::No;
}

// SPDX semantics: OR is the licensee's choice (any branch may satisfy),
// AND stacks obligations (all branches must).
inline Tri eval_compat(const CompatibilityMatrix& m, const Catalog& c,
                       const spdx::Expression& u, const spdx::Expression& d,
                       const EdgeContext& ctx) {
  auto combine = [](const std::vector<Tri>& parts, bool any_of) {
    bool unk = false;
    for (Tri t : parts) {
      if (any_of && t == Tri::Yes) return Tri::Yes;
      if (!any_of && t == Tri::No) return Tri::No;
      if (t == Tri::Unk) unk = true;
    }
    if (unk) return Tri::Unk;
    return any_of ? Tri::No : Tri::Yes;
  };
  if (u.kind != spdx::NodeKind::Leaf) {
    std::vector<Tri> parts;
    for (const auto& child : u.children) parts.push_back(eval_compat(m, c, child, d, ctx));
    return combine(parts, u.kind == spdx::NodeKind::Disjunction);
  }
  if (d.kind != spdx::NodeKind::Leaf) {
    std::vector<Tri> parts;
    for (const auto& child : d.children) parts.push_back(eval_compat(m, c, u, child, ctx));
    return combine(parts, d.kind == spdx::NodeKind::Disjunction);
  }
  return leaf_verdict(m, c, u, d, ctx);
}

inline void for_each_leaf(const spdx::Expression& e,
                          const std::function<void(const spdx::Expression&)>& fn) {
  if (e.kind == spdx::NodeKind::Leaf) {
    fn(e);
    return;
  }
  for (const auto& c : e.children) for_each_leaf(c, fn);
}

inline void emit(const nlohmann::json& doc, const std::string& out_file, bool to_stdout,
                 std::ostream& out) {
  if (!out_file.empty()) write_text_file(out_file, doc.dump(2) + "\n");
  if (to_stdout) out << doc.dump(2) << "\n";
}

inline std::set<std::string, ILess> load_whitelist(const fs::path& path) {
  nlohmann::json doc = load_json_file(path);
  if (!doc.is_array()) throw SchemaError(path.string() + ": whitelist must be a JSON array");
  std::set<std::string, ILess> ids;
  for (const auto& v : doc) {
    if (!v.is_string()) throw SchemaError(path.string() + ": whitelist entries must be strings");
    ids.insert(v.get<std::string>());
  }
  return ids;
}

}  // namespace detail

// --- check ------------------------------------------------------------------

inline int cmd_check(const CommonPaths& paths, const std::string& upstream,
                     const std::string& downstream, bool terms_preserved, bool json,
                     std::ostream& out, std::ostream& err) {
  spdx::Expression ue, de;
  try {
    ue = spdx::parse(upstream);
    de = spdx::parse(downstream);
  } catch (const SyntaxError& e) {
    err << "error: bad license expression: " << e.what() << "\n";
    return kExitUsage;
  }
  Catalog catalog = Catalog::load(paths.catalog_path());
  CompatibilityMatrix matrix = CompatibilityMatrix::load(paths.matrix_path());
  EdgeContext ctx{terms_preserved};
  detail::Tri result = detail::eval_compat(matrix, catalog, ue, de, ctx);

  nlohmann::json pairs = nlohmann::json::array();
  detail::for_each_leaf(ue, [&](const spdx::Expression& ul) {
    detail::for_each_leaf(de, [&](const spdx::Expression& dl) {
      Verdict v = verdict(matrix, catalog, spdx::lookup_token(ul), spdx::lookup_token(dl), ctx);
      pairs.push_back({{"downstream", spdx::lookup_token(dl)},
                       {"upstream", spdx::lookup_token(ul)},
                       {"verdict", verdict_to_json(v)}});
    });
  });
  const char* word = result == detail::Tri::Yes   ? "Compatible"
                     : result == detail::Tri::No  ? "Incompatible"
                                                  : "Unknown";
  if (json) {
    out << nlohmann::json({{"downstream", downstream},
                           {"pairs", pairs},
                           {"upstream", upstream},
                           {"verdict", word}})
               .dump(2)
        << "\n";
  } else {
    out << upstream << " -> " << downstream << ": " << word << "\n";
    for (const auto& p : pairs)
      out << "  " << p["upstream"].get<std::string>() << " -> "
          << p["downstream"].get<std::string>() << ": "
          << p["verdict"]["kind"].get<std::string>() << " ("
          << p["verdict"]["reason"].get<std::string>() << ")\n";
  }
  return result == detail::Tri::No ? kExitViolations : kExitOk;
}

// --- recommend ---------------------------------------------------------------

inline int cmd_recommend(const CommonPaths& paths, const std::string& upstream_csv,
                         const std::string& whitelist_file, bool terms_preserved, bool json,
                         const std::string& out_file, std::ostream& out, std::ostream& err) {
  std::vector<std::string> upstream;
  try {
    for (const std::string& part : split(upstream_csv, ',')) {
      std::string_view sv = trim_view(part);
      if (sv.empty()) continue;
      spdx::Expression e = spdx::parse(sv);
      detail::for_each_leaf(
          e, [&](const spdx::Expression& leaf) { upstream.push_back(spdx::lookup_token(leaf)); });
    }
  } catch (const SyntaxError& e) {
    err << "error: bad license expression: " << e.what() << "\n";
    return kExitUsage;
  }
  Catalog catalog = Catalog::load(paths.catalog_path());
  CompatibilityMatrix matrix = CompatibilityMatrix::load(paths.matrix_path());
  RecommendOptions opts;
  opts.ctx.terms_preserved = terms_preserved;
  if (!whitelist_file.empty()) opts.whitelist = detail::load_whitelist(whitelist_file);
  RecommendationList rec = recommend(catalog, matrix, upstream, opts);
  nlohmann::json doc = recommendation_to_json(rec);
  detail::emit(doc, out_file, json, out);
  if (!json) {
    if (!rec.resolvable) {
      out << "unresolvable: no license can satisfy every upstream obligation\n";
    } else {
      for (const auto& [cat, ids] : rec.categories) {
        out << cat << ":";
        for (const std::string& id : ids) out << " " << id;
        out << "\n";
      }
    }
  }
  return kExitOk;
}

// --- ingest ------------------------------------------------------------------

inline int cmd_ingest(const CommonPaths& paths, const std::string& datasets,
                      const std::string& models, const std::string& repos,
                      const std::string& aliases, const std::string& out_dir, bool likes_filter,
                      std::uint64_t likes_threshold, bool json, std::ostream& out,
                      std::ostream& err) {
  (void)err;
  Catalog catalog = Catalog::load(paths.catalog_path());
  std::ifstream ds(datasets), ms(models), rs(repos);
  if (!ds) throw IoError("cannot open dataset dump: " + datasets);
  if (!ms) throw IoError("cannot open model dump: " + models);
  if (!rs) throw IoError("cannot open repo dump: " + repos);
  DatasetAliasTable table;
  if (!aliases.empty()) {
    std::ifstream as(aliases);
    if (!as) throw IoError("cannot open alias table: " + aliases);
    table = load_alias_table(as, aliases);
  }
  IngestOptions opts;
  opts.likes_filter = likes_filter;
  opts.likes_threshold = likes_threshold;
  IngestResult result = ingest_records(catalog, ds, ms, rs, std::move(table), opts);
  close_dataset_to_repo(result.graph);
  for (Stage stage : kAllStages)
    result.stats.edges_per_stage[std::string(stage_code(stage))] =
        result.graph.edges(stage).size();
  result.graph.save(out_dir);
  if (!result.quarantine.empty()) {
    std::string lines;
    for (const QuarantinedRecord& q : result.quarantine) lines += q.to_json().dump() + "\n";
    write_text_file(fs::path(out_dir) / "quarantine.jsonl", lines);
  }
  nlohmann::json stats = result.stats.to_json();
  if (json) {
    out << stats.dump(2) << "\n";
  } else {
    out << "ingested into " << out_dir << "\n";
    for (const auto& [kind, n] : result.stats.nodes_per_kind)
      out << "  " << kind << " nodes: " << n << "\n";
    for (const auto& [stage, n] : result.stats.edges_per_stage)
      out << "  " << stage << " edges: " << n << "\n";
    out << "  quarantined references: " << result.stats.quarantined << "\n";
  }
  return kExitOk;
}

// --- audit -------------------------------------------------------------------

inline int cmd_audit(const CommonPaths& paths, const std::string& graph_dir,
                     const std::string& stage_code_str, const std::string& out_file,
                     bool with_fixability, bool json, std::ostream& out, std::ostream& err) {
  auto stage = parse_stage(stage_code_str);
  if (!stage) {
    err << "error: unknown stage '" << stage_code_str
        << "' (expected dataset-model, model-repo or dataset-repo)\n";
    return kExitUsage;
  }
  Catalog catalog = Catalog::load(paths.catalog_path());
  CompatibilityMatrix matrix = CompatibilityMatrix::load(paths.matrix_path());
  LineageGraph graph = LineageGraph::load(graph_dir);
  ViolationReport report = detect_conflicts(graph, *stage, matrix, catalog);
  nlohmann::json doc = report_to_json(report);
  if (with_fixability) {
    FixabilityReport fix = fixability(report, graph, matrix, catalog);
    doc["fixability"] = fixability_to_json(fix);
  }
  detail::emit(doc, out_file, json, out);
  if (!json) {
    out << stage_code_str << ": " << report.violations << " violation(s) in "
        << report.evaluated << " evaluated link(s), " << report.unknowns << " unknown(s)";
    if (report.violation_rate)
      out << ", rate " << format_fixed(round_half_up(*report.violation_rate * 100.0, 1), 1)
          << "%";
    out << "\n";
    if (with_fixability && doc.contains("fixability") &&
        !doc["fixability"]["fixability_pct"].is_null())
      out << "fixability: " << doc["fixability"]["fixable"].get<std::uint64_t>() << "/"
          << doc["fixability"]["total_violations"].get<std::uint64_t>() << " ("
          << format_fixed(doc["fixability"]["fixability_pct"].get<double>(), 1) << "%)\n";
  }
  return report.violations > 0 ? kExitViolations : kExitOk;
}

// --- scan --------------------------------------------------------------------

inline int cmd_scan(const CommonPaths& paths, const std::string& dir,
                    const std::string& signatures_file, const std::string& models_file,
                    bool json, const std::string& out_file, std::ostream& out,
                    std::ostream& err) {
  (void)err;
  scan::SignatureSet sigs = scan::SignatureSet::load(paths.signatures_path(signatures_file));
  nlohmann::json ids_doc = load_json_file(models_file);
  if (!ids_doc.is_array())
    throw SchemaError(models_file + ": model id file must be a JSON array");
  std::set<std::string> ids;
  for (const auto& v : ids_doc) ids.insert(v.get<std::string>());
  scan::UsageReport report = scan::scan_tree(dir, sigs, ids);
  nlohmann::json doc = scan::report_to_json(report);
  detail::emit(doc, out_file, json, out);
  if (!json) {
    out << report.matches.size() << " active usage(s), " << report.failures.size()
        << " unparseable file(s)\n";
    for (const scan::UsageMatch& m : report.matches)
      out << "  " << m.file << ":" << m.line << " " << m.signature
          << (m.model_id.empty() ? "" : " " + m.model_id) << "\n";
  }
  return kExitOk;
}

// --- report ------------------------------------------------------------------

inline int cmd_report(const CommonPaths& paths, const std::string& graph_dir,
                      const std::string& sankey_file, const std::string& patterns_file,
                      const std::string& compare_csv, bool json, std::ostream& out,
                      std::ostream& err) {
  (void)err;
  Catalog catalog = Catalog::load(paths.catalog_path());
  CompatibilityMatrix matrix = CompatibilityMatrix::load(paths.matrix_path());
  LineageGraph graph = LineageGraph::load(graph_dir);

  nlohmann::json stages_doc = nlohmann::json::object();
  std::string sankey_csv = "stage,source_category,target_category,count\n";
  std::uint64_t total_violations = 0;
  for (Stage stage : kAllStages) {
    TransitionMatrix tm = transition_matrix(graph, stage, matrix, catalog);
    ViolationReport report = detect_conflicts(graph, stage, matrix, catalog);
    total_violations += report.violations;
    ViolationPatternTable patterns = violation_patterns(report, catalog);
    stages_doc[std::string(stage_code(stage))] = {
        {"patterns", patterns_to_json(patterns)}, {"transitions", transition_to_json(tm)}};
    for (Category u : kAllCategories)
      for (Category d : kAllCategories) {
        std::uint64_t n = tm.cell(u, d);
        if (n == 0) continue;
        sankey_csv += std::string(stage_code(stage)) + "," + std::string(category_code(u)) +
                      "," + std::string(category_code(d)) + "," + std::to_string(n) + "\n";
      }
  }
  nlohmann::json doc;
  doc["stages"] = stages_doc;
  doc["distribution"] = distribution_to_json(category_distribution(graph, catalog));
  if (!compare_csv.empty()) {
    std::vector<CompatibilityMatrix> loaded;
    for (const std::string& path : split(compare_csv, ','))
      if (!trim_view(path).empty())
        loaded.push_back(CompatibilityMatrix::load(std::string(trim_view(path))));
    std::vector<const CompatibilityMatrix*> refs;
    refs.reserve(loaded.size());
    for (const CompatibilityMatrix& m : loaded) refs.push_back(&m);
    doc["comparison"] = comparison_to_json(compare_matrices(graph, refs, catalog));
  }
  if (!sankey_file.empty()) write_text_file(sankey_file, sankey_csv);
  if (!patterns_file.empty()) write_text_file(patterns_file, doc.dump(2) + "\n");
  if (json) out << doc.dump(2) << "\n";
  if (!json) {
    for (const auto& [stage, body] : stages_doc.items()) {
      const auto& totals = body["patterns"];
      out << stage << ": " << totals["violations"].get<std::uint64_t>() << " violation(s) in "
          << totals["evaluated"].get<std::uint64_t>() << " evaluated link(s)\n";
    }
  }
  return total_violations > 0 ? kExitViolations : kExitOk;
}

// --- validate ----------------------------------------------------------------

inline int cmd_validate(const CommonPaths& paths, const std::string& whitelist_file,
                        const std::string& signatures_file, std::ostream& out,
                        std::ostream& err) {
  (void)err;
  bool ok = true;
  auto pass = [&](const std::string& name, const std::string& note = {}) {
    out << "PASS " << name << (note.empty() ? "" : " (" + note + ")") << "\n";
  };
  auto fail = [&](const std::string& name, const std::string& why) {
    out << "FAIL " << name << ": " << why << "\n";
    ok = false;
  };

  std::optional<Catalog> catalog;
  try {
    catalog = Catalog::load(paths.catalog_path());
    pass("catalog-load", std::to_string(catalog->size()) + " entries");
  } catch (const Error& e) {
    fail("catalog-load", e.what());
  }
  if (catalog) {
    std::vector<std::string> issues = catalog->check_coherence();
    if (issues.empty()) {
      pass("catalog-coherence");
    } else {
      for (const std::string& issue : issues) fail("catalog-coherence", issue);
    }
  }
  std::optional<CompatibilityMatrix> matrix;
  try {
    matrix = CompatibilityMatrix::load(paths.matrix_path());
    pass("matrix-load", matrix->name());
  } catch (const Error& e) {
    fail("matrix-load", e.what());
  }
  if (catalog && matrix) {
    bool reflexive = true;
    for (const CatalogEntry& e : catalog->entries())
      if (verdict(*matrix, *catalog, e.id, e.id).kind != VerdictKind::Compatible) {
        fail("matrix-reflexivity", e.id);
        reflexive = false;
      }
    if (reflexive) pass("matrix-reflexivity");
    if (matrix->name() == "licenserec-default") {
      bool rows_ok = true;
      auto expect = [&](Category u, Category d, VerdictKind want) {
        if (matrix->category_default(u, d) != want) {
          fail("matrix-default-rows",
               std::string(category_code(u)) + " -> " + std::string(category_code(d)));
          rows_ok = false;
        }
      };
      for (Category d : kKnownCategories) {
        expect(Category::PublicDomain, d, VerdictKind::Compatible);
        expect(Category::Permissive, d,
               d == Category::PublicDomain ? VerdictKind::Incompatible
                                           : VerdictKind::Compatible);
        if (d != Category::Copyleft) expect(Category::Copyleft, d, VerdictKind::Incompatible);
        expect(Category::MlLicense, d, VerdictKind::ConditionalOnTermsPreservation);
        expect(Category::Nd, d, VerdictKind::Incompatible);
        expect(Category::NcNd, d, VerdictKind::Incompatible);
      }
      if (rows_ok) pass("matrix-default-rows");
    }
  }
  if (!whitelist_file.empty() && catalog) {
    try {
      std::set<std::string, ILess> wl = detail::load_whitelist(whitelist_file);
      bool known = true;
      for (const std::string& id : wl)
        if (!catalog->is_known(id)) {
          fail("whitelist-ids", "unknown license '" + id + "'");
          known = false;
        }
      if (known) pass("whitelist-ids", std::to_string(wl.size()) + " ids");
    } catch (const Error& e) {
      fail("whitelist-load", e.what());
    }
  }
  if (!signatures_file.empty()) {
    try {
      scan::SignatureSet sigs = scan::SignatureSet::load(signatures_file);
      pass("signatures-load", std::to_string(sigs.size()) + " signatures");
    } catch (const Error& e) {
      fail("signatures-load", e.what());
    }
  }
  return ok ? kExitOk : kExitData;
}

// --- driver ------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"licenserec: license compliance for dataset -> model -> application chains"};
  app.require_subcommand(1);

  int exit_code = kExitOk;

  // check
  auto* check = app.add_subcommand("check", "Check one upstream/downstream license pair");
  CommonPaths check_paths;
  check_paths.attach(check);
  std::string check_up, check_down;
  bool check_terms = false, check_json = false;
  check->add_option("--upstream", check_up, "Upstream license expression")->required();
  check->add_option("--downstream", check_down, "Downstream license expression")->required();
  check->add_flag("--terms-preserved", check_terms,
                  "Upstream license terms are included downstream");
  check->add_flag("--json", check_json, "Emit machine-readable JSON");
  check->callback([&] {
    exit_code = cmd_check(check_paths, check_up, check_down, check_terms, check_json, out, err);
  });

  // recommend
  auto* rec = app.add_subcommand("recommend", "Recommend compliant downstream licenses");
  CommonPaths rec_paths;
  rec_paths.attach(rec);
  std::string rec_up, rec_whitelist, rec_out;
  bool rec_terms = false, rec_json = false;
  rec->add_option("--upstream", rec_up,
                  "Comma-separated upstream license expressions (may be empty)");
  rec->add_option("--whitelist", rec_whitelist, "Whitelist file (JSON array of ids)");
  rec->add_option("--out", rec_out, "Write JSON to file");
  rec->add_flag("--terms-preserved", rec_terms, "Treat ML terms as preserved");
  rec->add_flag("--json", rec_json, "Emit machine-readable JSON");
  rec->callback([&] {
    exit_code = cmd_recommend(rec_paths, rec_up, rec_whitelist, rec_terms, rec_json, rec_out,
                              out, err);
  });

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Build a lineage graph from metadata dumps");
  CommonPaths ingest_paths;
  ingest_paths.attach(ingest);
  std::string in_datasets, in_models, in_repos, in_aliases, in_out;
  bool in_likes = false, in_json = false;
  std::uint64_t in_threshold = 20;
  ingest->add_option("--datasets", in_datasets, "Dataset dump (JSONL)")->required();
  ingest->add_option("--models", in_models, "Model dump (JSONL)")->required();
  ingest->add_option("--repos", in_repos, "Repository dump (JSONL)")->required();
  ingest->add_option("--aliases", in_aliases, "Dataset alias table (JSONL)");
  ingest->add_option("--out", in_out, "Output graph directory")->required();
  ingest->add_flag("--likes-filter", in_likes, "Keep only models above the likes threshold");
  ingest->add_option("--likes-threshold", in_threshold, "Likes threshold (default 20)");
  ingest->add_flag("--json", in_json, "Emit ingestion stats as JSON");
  ingest->callback([&] {
    exit_code = cmd_ingest(ingest_paths, in_datasets, in_models, in_repos, in_aliases, in_out,
                           in_likes, in_threshold, in_json, out, err);
  });

  // audit
  auto* audit = app.add_subcommand("audit", "Detect license violations on a lineage stage");
  CommonPaths audit_paths;
  audit_paths.attach(audit);
  std::string au_graph, au_stage, au_out;
  bool au_fix = false, au_json = false;
  audit->add_option("graph_dir", au_graph, "Graph directory from ingest")->required();
  audit->add_option("--stage", au_stage, "dataset-model | model-repo | dataset-repo")
      ->required();
  audit->add_option("--out", au_out, "Write the violation report to a file");
  audit->add_flag("--fixability", au_fix, "Also compute fixability");
  audit->add_flag("--json", au_json, "Emit machine-readable JSON");
  audit->callback([&] {
    exit_code =
        cmd_audit(audit_paths, au_graph, au_stage, au_out, au_fix, au_json, out, err);
  });

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "Scan a source tree for active model usage");
  CommonPaths scan_paths;
  scan_paths.attach(scan_cmd);
  std::string sc_dir, sc_sigs, sc_models, sc_out;
  bool sc_json = false;
  scan_cmd->add_option("dir", sc_dir, "Directory to scan")->required();
  scan_cmd->add_option("--signatures", sc_sigs, "Signature file (JSON)");
  scan_cmd->add_option("--models", sc_models, "Model id file (JSON array)")->required();
  scan_cmd->add_option("--out", sc_out, "Write the usage report to a file");
  scan_cmd->add_flag("--json", sc_json, "Emit machine-readable JSON");
  scan_cmd->callback([&] {
    exit_code = cmd_scan(scan_paths, sc_dir, sc_sigs, sc_models, sc_json, sc_out, out, err);
  });

  // report
  auto* report = app.add_subcommand("report", "Transition, pattern and comparison analytics");
  CommonPaths report_paths;
  report_paths.attach(report);
  std::string rp_graph, rp_sankey, rp_patterns, rp_compare;
  bool rp_json = false;
  report->add_option("graph_dir", rp_graph, "Graph directory from ingest")->required();
  report->add_option("--sankey", rp_sankey, "Write transition flows as CSV");
  report->add_option("--patterns", rp_patterns, "Write pattern/transition JSON");
  report->add_option("--compare", rp_compare, "Comma-separated alternate matrix files");
  report->add_flag("--json", rp_json, "Emit machine-readable JSON");
  report->callback([&] {
    exit_code = cmd_report(report_paths, rp_graph, rp_sankey, rp_patterns, rp_compare, rp_json,
                           out, err);
  });

  // validate
  auto* validate = app.add_subcommand("validate", "Validate catalog/matrix/whitelist data");
  CommonPaths val_paths;
  val_paths.attach(validate);
  std::string val_whitelist, val_signatures;
  validate->add_option("--whitelist", val_whitelist, "Whitelist file to check");
  validate->add_option("--signatures", val_signatures, "Signature file to check");
  validate->callback(
      [&] { exit_code = cmd_validate(val_paths, val_whitelist, val_signatures, out, err); });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return exit_code;
}

}  // namespace licenserec::cli
