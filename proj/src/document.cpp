#include "ltlsanity/document.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace ltlsanity {

namespace {

bool id_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-'; }

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view without_comment(std::string_view s) {
  const auto hash = s.find('#');
  return hash == std::string_view::npos ? s : s.substr(0, hash);
}

}  // namespace

std::optional<category> parse_section_name(std::string_view name) {
  if (name == "assumptions") return category::assumption;
  if (name == "required") return category::required;
  if (name == "forbidden") return category::forbidden;
  if (name == "plain") return category::plain;
  return std::nullopt;
}

std::string entry_text(const std::string& id, const quantified_formula& q) { return id + ": " + render(q); }

requirement_document requirement_document::parse(std::string_view text, std::string path) {
  requirement_document doc;
  doc.path_ = std::move(path);
  doc.trailing_newline_ = text.empty() || text.back() == '\n';
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      doc.lines_.emplace_back(text.substr(pos));
      break;
    }
    doc.lines_.emplace_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }

  category current = category::plain;
  std::set<std::string, std::less<>> ids;
  for (std::size_t i = 0; i < doc.lines_.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    const std::string& raw = doc.lines_[i];
    const std::string_view body = strip(without_comment(raw));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw document_error("unterminated section header", line_no, 1);
      const auto name = strip(body.substr(1, body.size() - 2));
      const auto cat = parse_section_name(name);
      if (!cat) throw document_error("unknown section '" + std::string(name) + "'", line_no, 1);
      current = *cat;
      doc.headers_.emplace_back(current, i);
      continue;
    }
    const auto colon = raw.find(':');
    if (colon == std::string::npos || raw.find('#') < colon) {
      throw document_error("expected 'id: formula'", line_no, 1);
    }
    const std::string_view id = strip(std::string_view(raw).substr(0, colon));
    if (id.empty() || !std::all_of(id.begin(), id.end(), id_char)) {
      throw document_error("invalid requirement id '" + std::string(id) + "'", line_no, 1);
    }
    if (!ids.insert(std::string(id)).second) {
      throw document_error("duplicate requirement id '" + std::string(id) + "'", line_no, 1);
    }
    const std::string_view formula_text = std::string_view(raw).substr(colon + 1);
    try {
      doc.reqs_.push_back({std::string(id), current, ltlsanity::parse(formula_text), raw});
    } catch (const parse_error& e) {
      const int column = e.line() == 1 ? static_cast<int>(colon) + 1 + e.column() : e.column();
      throw document_error(e.detail(), line_no + e.line() - 1, column);
    }
    doc.entry_line_.push_back(i);
  }
  return doc;
}

requirement_document requirement_document::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw document_error("cannot open " + path, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::vector<requirement> requirement_document::section(category c) const {
  std::vector<requirement> out;
  for (const auto& r : reqs_) {
    if (r.cat == c) out.push_back(r);
  }
  return out;
}

const requirement* requirement_document::find(std::string_view id) const {
  for (const auto& r : reqs_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

void requirement_document::append(const requirement& r, const std::vector<std::string>& comments) {
  std::optional<std::size_t> anchor;
  for (std::size_t k = 0; k < reqs_.size(); ++k) {
    if (reqs_[k].cat == r.cat) anchor = entry_line_[k];
  }
  if (!anchor) {
    for (const auto& [cat, line] : headers_) {
      if (cat == r.cat) anchor = line;
    }
  }
  if (!anchor) {
    if (!lines_.empty() && !strip(lines_.back()).empty()) lines_.emplace_back();
    lines_.push_back("[" + std::string(to_string(r.cat)) + "]");
    headers_.emplace_back(r.cat, lines_.size() - 1);
    anchor = lines_.size() - 1;
  }

  requirement stored = r;
  if (stored.source_text.empty()) stored.source_text = entry_text(r.id, r.formula);
  std::vector<std::string> block = comments;
  block.push_back(stored.source_text);
  const std::size_t at = *anchor + 1;
  lines_.insert(lines_.begin() + static_cast<std::ptrdiff_t>(at), block.begin(), block.end());
  auto shift = [&](std::size_t& line) {
    if (line >= at) line += block.size();
  };
  for (auto& l : entry_line_) shift(l);
  for (auto& h : headers_) shift(h.second);

  // Keep requirements in file order.
  const std::size_t line = at + block.size() - 1;
  const auto pos = std::upper_bound(entry_line_.begin(), entry_line_.end(), line) - entry_line_.begin();
  reqs_.insert(reqs_.begin() + pos, stored);
  entry_line_.insert(entry_line_.begin() + pos, line);
  if (!trailing_newline_) trailing_newline_ = true;
}

void requirement_document::add_header(const std::vector<std::string>& comments) {
  lines_.insert(lines_.begin(), comments.begin(), comments.end());
  for (auto& l : entry_line_) l += comments.size();
  for (auto& h : headers_) h.second += comments.size();
}

std::string requirement_document::text() const {
  std::string out;
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    out += lines_[i];
    if (i + 1 < lines_.size() || trailing_newline_) out += '\n';
  }
  return out;
}

}  // namespace ltlsanity
