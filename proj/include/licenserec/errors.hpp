// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace licenserec {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input in an expression string. `position` is the byte offset
// at which parsing failed.
struct SyntaxError : Error {
  std::size_t position;
  SyntaxError(const std::string& what, std::size_t pos)
      : Error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

// A data file does not match its schema. Message carries file/line/field
// context assembled by the loader.
struct SchemaError : Error {
  using Error::Error;
};

struct DuplicateAliasError : SchemaError {
  std::string tag, first_entry, second_entry;
  DuplicateAliasError(std::string tag_, std::string first, std::string second)
      : SchemaError("duplicate alias '" + tag_ + "' maps to both '" + first + "' and '" +
                    second + "'"),
        tag(std::move(tag_)),
        first_entry(std::move(first)),
        second_entry(std::move(second)) {}
};

struct MissingCategoryPairError : SchemaError {
  std::string upstream, downstream;
  MissingCategoryPairError(std::string u, std::string d)
      : SchemaError("matrix is missing the category default for (" + u + ", " + d + ")"),
        upstream(std::move(u)),
        downstream(std::move(d)) {}
};

struct DuplicateSignatureIdError : SchemaError {
  std::string id;
  explicit DuplicateSignatureIdError(std::string id_)
      : SchemaError("duplicate signature id '" + id_ + "'"), id(std::move(id_)) {}
};

struct IoError : Error {
  using Error::Error;
};

// A source file the usage scanner could not tokenize. Non-fatal at the
// tree level: the file is skipped and reported.
struct ParseFailure : Error {
  using Error::Error;
};

}  // namespace licenserec
