#include <CLI11.hpp>
#include <iostream>
#include <iterator>
#include <thread>

#include "commands.hpp"
#include "ltlsanity/document.hpp"

using namespace ltlsanity;
using namespace ltlsanity::cli;

namespace {

int emit(const outcome& out, const run_config& cfg) {
  if (cfg.format == output_format::json) {
    std::cout << out.report.dump(2) << "\n";
  } else if (out.raw_text) {
    std::cout << *out.raw_text;
  } else {
    std::cout << render_text(out.report);
  }
  return out.exit_code;
}

int fail(const std::string& message, const run_config& cfg, const char* command) {
  std::cerr << "ltlsanity: " << message << "\n";
  if (cfg.format == output_format::json) {
    nlohmann::ordered_json j;
    j["tool"] = "ltlsanity";
    j["command"] = command;
    j["error"] = {{"message", message}};
    std::cout << j.dump(2) << "\n";
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sanity checks for LTL requirement documents"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ltlsanity 0.1.0");

  run_config cfg;
  cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string file;
  std::string format = "text";
  std::vector<std::string> automata;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--jobs,-j", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--translator", cfg.translator,
                    "Shell command reading a formula on stdin and printing an automaton");
    sub->add_option("--max-states", cfg.max_states, "State limit of the built-in translator");
    sub->add_flag("--stats", cfg.stats, "Report check counts and timings");
  };
  auto document = [&](CLI::App* sub) { sub->add_option("file", file, "Requirement file")->required(); };
  auto coverage_opts = [&](CLI::App* sub) {
    sub->add_option("--max-paths", cfg.max_paths, "Limit on enumerated accepting paths");
  };

  auto* check = app.add_subcommand("check", "Report minimal inconsistent subsets");
  document(check);
  common(check);
  check->add_option("--section", cfg.section, "Only this section");

  auto* redundancy = app.add_subcommand("redundancy", "Report redundant requirements");
  document(redundancy);
  common(redundancy);
  redundancy->add_option("--section", cfg.section, "Only this section");

  auto* vacuity = app.add_subcommand("vacuity", "Add negated vacuity witnesses as existential requirements");
  document(vacuity);
  common(vacuity);
  vacuity->add_option("-o,--output", cfg.output, "Write the augmented document here");

  auto* suggest = app.add_subcommand("suggest", "Suggest assumptions that raise coverage");
  document(suggest);
  common(suggest);
  coverage_opts(suggest);
  suggest->add_option("--rounds", cfg.rounds, "Selection rounds");
  suggest->add_option("--seed", cfg.seed, "Seed for candidate generation");
  suggest->add_option("--pool-size", cfg.pool_size, "Number of generated candidates");
  suggest->add_option("--candidates", cfg.candidates_file, "File with one candidate formula per line");
  suggest->add_flag("--interactive", cfg.interactive, "Ask before accepting each suggestion");
  suggest->add_option("-o,--output", cfg.output, "Write the document with accepted suggestions here");

  auto* coverage = app.add_subcommand("coverage", "Coverage of the required behaviour by the assumptions");
  coverage->add_option("file", file, "Requirement file");
  coverage->add_option("--automata", automata, "Two automata files: covered and covering")->expected(2);
  common(coverage);
  coverage_opts(coverage);

  auto* translate = app.add_subcommand("translate", "Translate a formula read from stdin");
  common(translate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.format = format == "json" ? output_format::json : output_format::text;

  const char* command = app.get_subcommands().front()->get_name().c_str();
  try {
    if (check->parsed()) return emit(cmd_check(file, cfg), cfg);
    if (redundancy->parsed()) return emit(cmd_redundancy(file, cfg), cfg);
    if (vacuity->parsed()) return emit(cmd_vacuity(file, cfg), cfg);
    if (suggest->parsed()) return emit(cmd_suggest(file, cfg, std::cin, std::cerr), cfg);
    if (coverage->parsed()) {
      if (!automata.empty()) return emit(cmd_coverage_automata(automata[0], automata[1], cfg), cfg);
      if (file.empty()) return fail("coverage needs a requirement file or --automata", cfg, command);
      return emit(cmd_coverage(file, cfg), cfg);
    }
    if (translate->parsed()) {
      const std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
      return emit(cmd_translate(text, cfg), cfg);
    }
  } catch (const document_error& e) {
    std::string where;
    if (e.line() > 0) where = ":" + std::to_string(e.line()) + (e.column() > 0 ? ":" + std::to_string(e.column()) : "");
    return fail(file + where + ": " + e.what(), cfg, command);
  } catch (const parse_error& e) {
    return fail(std::string("parse error: ") + e.what(), cfg, command);
  } catch (const std::exception& e) {
    return fail(e.what(), cfg, command);
  }
  return 2;
}
