#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ltlsanity/formula.hpp"

namespace ltlsanity {

class document_error : public std::runtime_error {
 public:
  document_error(const std::string& msg, int line, int column = 0)
      : std::runtime_error(msg), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A requirement file: `[assumptions]`, `[required]`, `[forbidden]` and
/// `[plain]` sections holding `id: [forall|exists] formula` entries. The
/// original lines are kept so unchanged documents print back byte for byte.
class requirement_document {
 public:
  static requirement_document parse(std::string_view text, std::string path = {});
  static requirement_document load(const std::string& path);

  const std::string& path() const { return path_; }
  const std::vector<requirement>& requirements() const { return reqs_; }
  std::vector<requirement> section(category c) const;
  const requirement* find(std::string_view id) const;

  /// Inserts `r` after the last entry of its section (creating the section
  /// at the end if needed), preceded by optional comment lines.
  void append(const requirement& r, const std::vector<std::string>& comments = {});

  /// Prepends comment lines to the whole document.
  void add_header(const std::vector<std::string>& comments);

  std::string text() const;

 private:
  std::string path_;
  std::vector<std::string> lines_;
  bool trailing_newline_ = true;
  std::vector<requirement> reqs_;
  std::vector<std::size_t> entry_line_;  // per requirement
  std::vector<std::pair<category, std::size_t>> headers_;
};

std::optional<category> parse_section_name(std::string_view name);

/// The entry line for a requirement: `id: [exists ]formula`.
std::string entry_text(const std::string& id, const quantified_formula& q);

}  // namespace ltlsanity
