#pragma once

#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>

namespace ltlsanity::cli {

enum class output_format { text, json };

struct run_config {
  std::size_t jobs = 1;
  output_format format = output_format::text;
  std::uint64_t seed = 1;
  std::size_t rounds = 3;
  std::size_t pool_size = 40;
  bool interactive = false;
  bool stats = false;
  std::optional<std::string> candidates_file;
  std::optional<std::string> translator;
  std::size_t max_states = 200000;
  std::size_t max_paths = 100000;
  std::optional<std::string> section;
  std::optional<std::string> output;
};

/// What a command hands back to main: the report and the exit status.
struct outcome {
  nlohmann::ordered_json report;
  int exit_code = 0;
  /// Text to print instead of the rendered report (text mode only).
  std::optional<std::string> raw_text;
};

outcome cmd_check(const std::string& file, const run_config& cfg);
outcome cmd_redundancy(const std::string& file, const run_config& cfg);
outcome cmd_vacuity(const std::string& file, const run_config& cfg);
outcome cmd_suggest(const std::string& file, const run_config& cfg, std::istream& in, std::ostream& prompt);
outcome cmd_coverage(const std::string& file, const run_config& cfg);
outcome cmd_coverage_automata(const std::string& covered, const std::string& covering, const run_config& cfg);
outcome cmd_translate(const std::string& formula_text, const run_config& cfg);

std::string render_text(const nlohmann::ordered_json& report);

}  // namespace ltlsanity::cli
