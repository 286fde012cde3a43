// SPDX-License-Identifier: Apache-2.0
//
// Syntax-aware scan of Python sources for model-loading call expressions.
// The scanner tokenizes the file (comments skipped, string literals kept
// as opaque atoms) and recognizes dotted call paths, so text inside
// comments, docstrings or other bare strings can never produce a match:
// a match requires a real call whose callee fits a signature and, when the
// signature asks for it, a queried model id inside the call's string
// arguments.
#pragma once

#include <algorithm>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "licenserec/errors.hpp"
#include "licenserec/io.hpp"
#include "licenserec/text.hpp"

namespace licenserec::scan {

enum class ArgMatch { ModelIdInStringArg, Any };

inline std::string_view arg_match_code(ArgMatch m) {
  return m == ArgMatch::Any ? "any" : "model_id_in_string_arg";
}

struct Signature {
  std::string id;
  std::string callee_pattern;  // dotted path; '*' allowed as leading segment only
  ArgMatch arg_match = ArgMatch::ModelIdInStringArg;
};

class SignatureSet {
 public:
  static SignatureSet load(const std::filesystem::path& path) {
    std::string text = read_text_file(path);
    if (trim_view(text).empty()) return SignatureSet{};  // empty file: empty set
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError(path.string() + ": " + e.what());
    }
    return from_json(doc, path.string());
  }

  static SignatureSet from_json(const nlohmann::json& doc, const std::string& label) {
    if (!doc.is_array()) throw SchemaError(label + ": signature file must be an array");
    SignatureSet set;
    for (const auto& item : doc) {
      if (!item.is_object() || !item.contains("id") || !item.contains("callee_pattern"))
        throw SchemaError(label + ": signatures need 'id' and 'callee_pattern'");
      Signature sig;
      sig.id = item["id"].get<std::string>();
      sig.callee_pattern = item["callee_pattern"].get<std::string>();
      if (sig.callee_pattern.empty())
        throw SchemaError(label + ": '" + sig.id + "' has an empty callee_pattern");
      std::string mode = item.value("arg_match", "model_id_in_string_arg");
      if (mode == "any")
        sig.arg_match = ArgMatch::Any;
      else if (mode == "model_id_in_string_arg")
        sig.arg_match = ArgMatch::ModelIdInStringArg;
      else
        throw SchemaError(label + ": '" + sig.id + "' has unknown arg_match '" + mode + "'");
      auto segs = split(sig.callee_pattern, '.');
      for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].empty())
          throw SchemaError(label + ": '" + sig.id + "' has an empty pattern segment");
        if (segs[i] == "*" && i != 0)
          throw SchemaError(label + ": '" + sig.id + "' wildcard only allowed as leading segment");
      }
      set.signatures_.push_back(std::move(sig));
    }
    std::sort(set.signatures_.begin(), set.signatures_.end(),
              [](const Signature& a, const Signature& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < set.signatures_.size(); ++i)
      if (set.signatures_[i].id == set.signatures_[i - 1].id)
        throw DuplicateSignatureIdError(set.signatures_[i].id);
    return set;
  }

  const std::vector<Signature>& signatures() const { return signatures_; }
  std::size_t size() const { return signatures_.size(); }

 private:
  std::vector<Signature> signatures_;
};

struct UsageMatch {
  std::string file;
  std::size_t line = 0;
  std::string signature;
  std::string model_id;  // empty for arg_match=any signatures with no id present
};

struct ScanFailure {
  std::string file, error;
};

struct UsageReport {
  std::string root;
  std::vector<UsageMatch> matches;
  std::vector<ScanFailure> failures;
};

namespace detail {

struct Tok {
  enum Type { Name, Number, Str, Punct } type = Punct;
  std::string text;     // Name/Number/Punct spelling
  std::string content;  // Str: raw inner text, quotes stripped
  std::size_t line = 0;
};

inline bool name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool name_char(char c) { return name_start(c) || (c >= '0' && c <= '9'); }

inline bool string_prefix(std::string_view word) {
  if (word.size() > 2) return false;
  for (char c : word) {
    char l = ascii_lower(c);
    if (l != 'r' && l != 'b' && l != 'u' && l != 'f') return false;
  }
  return !word.empty();
}

// Tokenizes Python-ish source. Throws ParseFailure on unterminated strings
// and unbalanced brackets; anything else degrades to punct tokens.
inline std::vector<Tok> tokenize(std::string_view text) {
  std::vector<Tok> toks;
  std::vector<char> brackets;
  std::size_t i = 0, line = 1;

  auto scan_string = [&](bool raw) {
    char quote = text[i];
    bool triple = i + 2 < text.size() && text[i + 1] == quote && text[i + 2] == quote;
    std::size_t start_line = line;
    i += triple ? 3 : 1;
    std::string content;
    while (i < text.size()) {
      char c = text[i];
      if (c == '\\' && !raw) {
        if (i + 1 >= text.size()) throw ParseFailure("unterminated string literal");
        if (text[i + 1] == '\n') ++line;
        content += text[i];
        content += text[i + 1];
        i += 2;
        continue;
      }
      if (c == quote) {
        if (!triple) {
          ++i;
          toks.push_back({Tok::Str, "", std::move(content), start_line});
          return;
        }
        if (i + 2 < text.size() && text[i + 1] == quote && text[i + 2] == quote) {
          i += 3;
          toks.push_back({Tok::Str, "", std::move(content), start_line});
          return;
        }
      }
      if (c == '\n') {
        if (!triple)
          throw ParseFailure("unterminated string literal at line " + std::to_string(line));
        ++line;
      }
      content += c;
      ++i;
    }
    throw ParseFailure("unterminated string literal at line " + std::to_string(start_line));
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
      ++i;
      continue;
    }
    if (c == '\\' && i + 1 < text.size() && text[i + 1] == '\n') {
      ++line;
      i += 2;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '\'' || c == '"') {
      scan_string(false);
      continue;
    }
    if (name_start(c)) {
      std::size_t start = i;
      while (i < text.size() && name_char(text[i])) ++i;
      std::string word(text.substr(start, i - start));
      if (i < text.size() && (text[i] == '\'' || text[i] == '"') && string_prefix(word)) {
        bool raw = lower_copy(word).find('r') != std::string::npos;
        scan_string(raw);
        continue;
      }
      toks.push_back({Tok::Name, std::move(word), "", line});
      continue;
    }
    if (c >= '0' && c <= '9') {
      std::size_t start = i;
      while (i < text.size() &&
             (name_char(text[i]) || text[i] == '.'))
        ++i;
      toks.push_back({Tok::Number, std::string(text.substr(start, i - start)), "", line});
      continue;
    }
    if (c == '(' || c == '[' || c == '{') {
      brackets.push_back(c);
    } else if (c == ')' || c == ']' || c == '}') {
      char open = c == ')' ? '(' : c == ']' ? '[' : '{';
      if (brackets.empty() || brackets.back() != open)
        throw ParseFailure("unbalanced '" + std::string(1, c) + "' at line " +
                           std::to_string(line));
      brackets.pop_back();
    }
    toks.push_back({Tok::Punct, std::string(1, c), "", line});
    ++i;
  }
  if (!brackets.empty())
    throw ParseFailure("unbalanced '" + std::string(1, brackets.back()) + "' at end of file");
  return toks;
}

struct CallSite {
  std::vector<std::string> path;  // dotted callee; "<expr>" marks a computed base
  std::size_t line = 0;
  std::size_t open_index = 0;  // token index of '('
};

inline std::vector<CallSite> find_calls(const std::vector<Tok>& toks) {
  std::vector<CallSite> calls;
  std::vector<std::string> path;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Tok& t = toks[i];
    const Tok* prev = i ? &toks[i - 1] : nullptr;
    if (t.type == Tok::Name) {
      if (prev && prev->type == Tok::Punct && prev->text == "." && !path.empty())
        path.push_back(t.text);
      else
        path = {t.text};
      continue;
    }
    if (t.type == Tok::Punct && t.text == ".") {
      bool chained = prev && ((prev->type == Tok::Punct &&
                               (prev->text == ")" || prev->text == "]")) ||
                              prev->type == Tok::Str);
      if (chained) path = {"<expr>"};
      else if (!(prev && prev->type == Tok::Name && !path.empty()))
        path.clear();
      continue;
    }
    if (t.type == Tok::Punct && t.text == "(") {
      if (prev && prev->type == Tok::Name && !path.empty() && path.back() == prev->text)
        calls.push_back({path, prev->line, i});
      path.clear();
      continue;
    }
    path.clear();
  }
  return calls;
}

inline bool pattern_matches(const std::vector<std::string>& path, std::string_view pattern) {
  auto segs = split(pattern, '.');
  if (!segs.empty() && segs[0] == "*") {
    if (path.size() < segs.size()) return false;  // '*' consumes at least one segment
    std::size_t offset = path.size() - (segs.size() - 1);
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (path[offset + i - 1] != segs[i]) return false;
    return true;
  }
  if (path.size() != segs.size()) return false;
  for (std::size_t i = 0; i < segs.size(); ++i)
    if (path[i] != segs[i]) return false;
  return true;
}

// String literals anywhere inside the call's parentheses.
inline std::vector<const Tok*> call_arg_strings(const std::vector<Tok>& toks,
                                                std::size_t open_index) {
  std::vector<const Tok*> out;
  int depth = 0;
  for (std::size_t i = open_index; i < toks.size(); ++i) {
    const Tok& t = toks[i];
    if (t.type == Tok::Punct && (t.text == "(" || t.text == "[" || t.text == "{")) ++depth;
    else if (t.type == Tok::Punct && (t.text == ")" || t.text == "]" || t.text == "}")) {
      --depth;
      if (depth == 0) break;
    } else if (t.type == Tok::Str && depth > 0) {
      out.push_back(&t);
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<UsageMatch> scan_source(std::string_view text, const SignatureSet& sigs,
                                           const std::set<std::string>& model_ids,
                                           std::string_view file_label) {
  std::vector<UsageMatch> matches;
  std::vector<detail::Tok> toks = detail::tokenize(text);
  std::vector<detail::CallSite> calls = detail::find_calls(toks);
  for (const detail::CallSite& call : calls) {
    for (const Signature& sig : sigs.signatures()) {
      if (!detail::pattern_matches(call.path, sig.callee_pattern)) continue;
      std::vector<const detail::Tok*> args = detail::call_arg_strings(toks, call.open_index);
      std::vector<std::string> found;
      for (const std::string& id : model_ids)
        for (const detail::Tok* s : args)
          if (s->content.find(id) != std::string::npos) {
            found.push_back(id);
            break;
          }
      if (sig.arg_match == ArgMatch::ModelIdInStringArg) {
        if (found.empty()) continue;  // callee fits but no queried id: not evidence
        for (const std::string& id : found)
          matches.push_back({std::string(file_label), call.line, sig.id, id});
      } else {
        if (!found.empty())
          for (const std::string& id : found)
            matches.push_back({std::string(file_label), call.line, sig.id, id});
        else
          matches.push_back({std::string(file_label), call.line, sig.id, ""});
      }
      break;  // first matching signature claims the call
    }
  }
  return matches;
}

struct ScanOptions {
  std::set<std::string> extensions = {".py"};
};

inline UsageReport scan_tree(const std::filesystem::path& root, const SignatureSet& sigs,
                             const std::set<std::string>& model_ids,
                             const ScanOptions& opts = {}) {
  UsageReport report;
  report.root = root.string();
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  std::filesystem::recursive_directory_iterator it(root, ec), end;
  if (ec) {
    report.failures.push_back({root.string(), "cannot open directory: " + ec.message()});
    return report;
  }
  for (; it != end; it.increment(ec)) {
    if (ec) {
      report.failures.push_back({root.string(), ec.message()});
      break;
    }
    if (!it->is_regular_file(ec)) continue;
    if (opts.extensions.count(it->path().extension().string()))
      files.push_back(it->path());
  }
  std::sort(files.begin(), files.end(), [&](const auto& a, const auto& b) {
    return a.lexically_relative(root).generic_string() <
           b.lexically_relative(root).generic_string();
  });
  for (const std::filesystem::path& file : files) {
    std::string rel = file.lexically_relative(root).generic_string();
    try {
      std::string text = read_text_file(file);
      for (UsageMatch& m : scan_source(text, sigs, model_ids, rel))
        report.matches.push_back(std::move(m));
    } catch (const ParseFailure& e) {
      report.failures.push_back({rel, e.what()});
    } catch (const IoError& e) {
      report.failures.push_back({rel, e.what()});
    }
  }
  std::sort(report.matches.begin(), report.matches.end(),
            [](const UsageMatch& a, const UsageMatch& b) {
              return std::tie(a.file, a.line, a.signature, a.model_id) <
                     std::tie(b.file, b.line, b.signature, b.model_id);
            });
  std::sort(report.failures.begin(), report.failures.end(),
            [](const ScanFailure& a, const ScanFailure& b) {
              return std::tie(a.file, a.error) < std::tie(b.file, b.error);
            });
  return report;
}

inline nlohmann::json report_to_json(const UsageReport& r) {
  nlohmann::json matches = nlohmann::json::array();
  for (const UsageMatch& m : r.matches)
    matches.push_back({{"file", m.file},
                       {"line", m.line},
                       {"model_id", m.model_id},
                       {"signature", m.signature}});
  nlohmann::json failures = nlohmann::json::array();
  for (const ScanFailure& f : r.failures)
    failures.push_back({{"error", f.error}, {"file", f.file}});
  return {{"failures", failures}, {"matches", matches}, {"repo", r.root}};
}

}  // namespace licenserec::scan
