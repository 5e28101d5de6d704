#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ltlsanity/automaton.hpp"
#include "ltlsanity/coverage.hpp"
#include "ltlsanity/document.hpp"
#include "ltlsanity/sanity.hpp"
#include "ltlsanity/vacuity.hpp"

namespace ltlsanity::cli {

using json = nlohmann::ordered_json;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

json header(const char* command, const std::string& file) {
  json j;
  j["tool"] = "ltlsanity";
  j["command"] = command;
  if (!file.empty()) j["file"] = file;
  return j;
}

json fraction(const rational& r) { return {{"value", r.str()}, {"percent", to_percent(r)}}; }

std::vector<category> selected_sections(const requirement_document& doc, const run_config& cfg) {
  if (cfg.section) {
    const auto c = parse_section_name(*cfg.section);
    if (!c) throw std::invalid_argument("unknown section '" + *cfg.section + "'");
    return {*c};
  }
  std::vector<category> out;
  for (category c : {category::assumption, category::required, category::forbidden, category::plain}) {
    if (!doc.section(c).empty()) out.push_back(c);
  }
  return out;
}

translate_options translation(const run_config& cfg) {
  translate_options t;
  t.max_states = cfg.max_states;
  return t;
}

sanity_options sanity_config(const run_config& cfg) {
  sanity_options o;
  o.jobs = cfg.jobs;
  o.translation = translation(cfg);
  if (cfg.translator) {
    const std::string cmd = *cfg.translator;
    o.oracle = [cmd](const std::vector<formula>& fs) { return !is_empty(external_translate(conjoin(fs), cmd)).empty; };
  }
  return o;
}

std::vector<quantified_formula> formulas_of(const std::vector<requirement>& rs) {
  std::vector<quantified_formula> out;
  for (const auto& r : rs) out.push_back(r.formula);
  return out;
}

json ids_of(const std::vector<requirement>& rs, const std::vector<std::size_t>& indices) {
  json out = json::array();
  for (auto i : indices) out.push_back(rs[i].id);
  return out;
}

json requirement_list(const std::vector<requirement>& rs) {
  json out = json::array();
  for (const auto& r : rs) out.push_back({{"id", r.id}, {"formula", render(r.formula)}});
  return out;
}

json undecided_list(const std::vector<requirement>& rs, const std::vector<undecided_set>& us) {
  json out = json::array();
  for (const auto& u : us) {
    json j;
    j["target"] = u.target ? json(rs[*u.target].id) : json(nullptr);
    j["requirements"] = ids_of(rs, u.indices);
    j["reason"] = u.reason;
    out.push_back(j);
  }
  return out;
}

json stats_of(const sanity_report& r, clock_type::time_point start) {
  return {{"checks_performed", r.checks_performed}, {"checks_possible", r.checks_possible},
          {"seconds", seconds_since(start)}};
}

std::vector<formula> bodies(const std::vector<requirement>& rs) {
  std::vector<formula> out;
  for (const auto& r : rs) out.push_back(r.formula.body);
  return out;
}

std::vector<formula> load_candidates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::vector<formula> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = line.substr(0, hash);
    if (body.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto q = parse(body);
      if (!q.is_universal()) throw document_error("candidates must not be existential", line_no);
      out.push_back(q.body);
    } catch (const parse_error& e) {
      throw document_error(path + ": " + e.detail(), line_no, e.column());
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

}  // namespace

outcome cmd_check(const std::string& file, const run_config& cfg) {
  const auto doc = requirement_document::load(file);
  outcome out;
  out.report = header("check", file);
  json sections = json::array();
  bool found = false;
  bool undecided = false;
  for (category c : selected_sections(doc, cfg)) {
    const auto reqs = doc.section(c);
    json s;
    s["section"] = to_string(c);
    s["requirements"] = requirement_list(reqs);
    s["minimal_inconsistent"] = json::array();
    s["undecided"] = json::array();
    if (!reqs.empty()) {
      const auto start = clock_type::now();
      const auto r = find_min_inconsistent(formulas_of(reqs), sanity_config(cfg));
      for (const auto& m : r.minimal_inconsistent) s["minimal_inconsistent"].push_back(ids_of(reqs, m));
      s["undecided"] = undecided_list(reqs, r.undecided);
      found = found || !r.minimal_inconsistent.empty();
      undecided = undecided || !r.undecided.empty();
      if (cfg.stats) s["stats"] = stats_of(r, start);
    }
    sections.push_back(s);
  }
  out.report["sections"] = sections;
  out.report["verdict"] = found ? "inconsistent" : undecided ? "undecided" : "consistent";
  out.exit_code = found ? 1 : undecided ? 2 : 0;
  return out;
}

outcome cmd_redundancy(const std::string& file, const run_config& cfg) {
  const auto doc = requirement_document::load(file);
  outcome out;
  out.report = header("redundancy", file);
  json sections = json::array();
  bool found = false;
  bool undecided = false;
  for (category c : selected_sections(doc, cfg)) {
    const auto reqs = doc.section(c);
    json s;
    s["section"] = to_string(c);
    s["requirements"] = requirement_list(reqs);
    s["redundancies"] = json::array();
    s["undecided"] = json::array();
    if (!reqs.empty()) {
      const auto start = clock_type::now();
      const auto r = find_redundancies(formulas_of(reqs), sanity_config(cfg));
      for (const auto& red : r.redundancies) {
        s["redundancies"].push_back({{"target", reqs[red.target].id}, {"witness", ids_of(reqs, red.witness)}});
      }
      s["undecided"] = undecided_list(reqs, r.undecided);
      found = found || !r.redundancies.empty();
      undecided = undecided || !r.undecided.empty();
      if (cfg.stats) s["stats"] = stats_of(r, start);
    }
    sections.push_back(s);
  }
  out.report["sections"] = sections;
  out.report["verdict"] = found ? "redundant" : undecided ? "undecided" : "irredundant";
  out.exit_code = found ? 1 : undecided ? 2 : 0;
  return out;
}

outcome cmd_vacuity(const std::string& file, const run_config& cfg) {
  auto doc = requirement_document::load(file);
  const auto result = augment(doc.requirements(), sanity_config(cfg));

  outcome out;
  out.report = header("vacuity", file);
  json per = json::array();
  for (const auto& r : doc.requirements()) {
    if (!r.formula.is_universal()) continue;
    const auto analysis = analyse_witnesses(r.formula.body);
    json w = json::array();
    for (const auto& f : analysis.witnesses) w.push_back(render(f));
    per.push_back({{"requirement", r.id}, {"witnesses", w}, {"diagnostics", analysis.diagnostics}});
  }
  auto injections = [](const std::vector<injection>& list) {
    json a = json::array();
    for (const auto& inj : list) {
      a.push_back({{"id", inj.req.id},
                   {"source", inj.source_id},
                   {"witness", render(inj.witness)},
                   {"formula", render(inj.req.formula)}});
    }
    return a;
  };
  out.report["witnesses"] = per;
  out.report["injected"] = injections(result.injected);
  out.report["dropped"] = injections(result.dropped);
  out.report["diagnostics"] = result.diagnostics;

  for (const auto& inj : result.injected) {
    doc.append(inj.req, {"# negated vacuity witness of " + inj.source_id + ": " + render(inj.witness)});
  }
  doc.add_header({"# augmented with negated vacuity witnesses by ltlsanity"});
  const std::string text = doc.text();
  out.report["document"] = text;
  if (cfg.output) {
    write_file(*cfg.output, text);
  } else {
    out.raw_text = text;
  }
  return out;
}

namespace {

outcome run_coverage(const char* command, const std::string& file, run_config cfg, std::istream* in,
                     std::ostream* prompt) {
  auto doc = requirement_document::load(file);
  const auto assumptions = bodies(doc.section(category::assumption));
  if (assumptions.empty()) throw std::invalid_argument(file + ": the [assumptions] section is empty");
  const auto required = bodies(doc.section(category::required));
  const auto forbidden = bodies(doc.section(category::forbidden));

  std::vector<formula> pool;
  if (cfg.rounds > 0) {
    if (cfg.candidates_file) {
      pool = load_candidates(*cfg.candidates_file);
    } else {
      std::vector<std::string> aps;
      for (const auto& r : doc.requirements()) {
        for (auto& a : atoms(r.formula.body)) aps.push_back(a);
      }
      std::sort(aps.begin(), aps.end());
      aps.erase(std::unique(aps.begin(), aps.end()), aps.end());
      candidate_options co;
      co.count = cfg.pool_size;
      co.seed = cfg.seed;
      co.translation = translation(cfg);
      pool = generate_candidates(aps, co);
    }
  }

  completeness_options opts;
  opts.rounds = cfg.rounds;
  opts.jobs = cfg.jobs;
  opts.max_paths = cfg.max_paths;
  opts.translation = translation(cfg);
  if (cfg.translator) {
    const std::string cmd = *cfg.translator;
    opts.translator = [cmd](const formula& f) { return external_translate(f, cmd); };
  }
  std::vector<formula> accepted;
  std::size_t round_no = 0;
  if (cfg.interactive && in && prompt) {
    opts.on_round = [&](const coverage_round& r) {
      ++round_no;
      *prompt << "round " << round_no << ": " << render(r.selected) << "  coverage " << to_percent(r.coverage)
              << "%\n[a]ccept, [s]kip or s[t]op? " << std::flush;
      std::string answer;
      if (!std::getline(*in, answer)) return false;
      if (answer == "a" || answer == "accept") {
        accepted.push_back(r.selected);
        return true;
      }
      return !(answer == "t" || answer == "stop");
    };
  }

  const auto start = clock_type::now();
  const auto rep = completeness_loop(assumptions, required, forbidden, pool, opts);

  outcome out;
  out.report = header(command, file);
  out.report["baseline"] = fraction(rep.baseline);
  out.report["baseline_paths"] = rep.baseline_paths;
  json rounds = json::array();
  for (std::size_t i = 0; i < rep.rounds.size(); ++i) {
    rounds.push_back({{"round", i + 1},
                      {"formula", render(rep.rounds[i].selected)},
                      {"coverage", fraction(rep.rounds[i].coverage)}});
  }
  if (std::string_view(command) == "suggest") {
    out.report["candidates"] = pool.size();
    out.report["rounds"] = rounds;
    json acc = json::array();
    std::size_t k = 0;
    for (const auto& f : accepted) {
      std::string id;
      do {
        id = "suggested" + std::to_string(++k);
      } while (doc.find(id));
      const requirement r{id, category::required, {quantifier::universal, f}, {}};
      doc.append(r, {"# suggested by the completeness loop"});
      acc.push_back({{"id", id}, {"formula", render(f)}});
    }
    out.report["accepted"] = acc;
    if (cfg.output && !accepted.empty()) write_file(*cfg.output, doc.text());
  }
  out.report["diagnostics"] = rep.diagnostics;
  if (cfg.stats) out.report["stats"] = {{"seconds", seconds_since(start)}};
  return out;
}

}  // namespace

outcome cmd_suggest(const std::string& file, const run_config& cfg, std::istream& in, std::ostream& prompt) {
  return run_coverage("suggest", file, cfg, &in, &prompt);
}

outcome cmd_coverage(const std::string& file, const run_config& cfg) {
  run_config c = cfg;
  c.rounds = 0;
  return run_coverage("coverage", file, c, nullptr, nullptr);
}

outcome cmd_coverage_automata(const std::string& covered, const std::string& covering, const run_config& cfg) {
  auto load = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return import_automaton(ss.str());
  };
  const auto res = automaton_coverage(load(covered), load(covering), cfg.max_paths);
  outcome out;
  out.report = header("coverage", covered);
  out.report["covering"] = covering;
  out.report["baseline"] = fraction(res.value);
  out.report["baseline_paths"] = res.paths;
  out.report["diagnostics"] = res.diagnostics;
  return out;
}

outcome cmd_translate(const std::string& formula_text, const run_config& cfg) {
  const formula f = parse_formula(formula_text);
  const auto a = cfg.translator ? external_translate(f, *cfg.translator) : translate(f, translation(cfg));
  outcome out;
  out.report = header("translate", "");
  out.report["formula"] = render(f);
  out.report["states"] = a.num_states;
  out.report["edges"] = a.edges.size();
  out.report["automaton"] = export_automaton(a);
  out.raw_text = export_automaton(a);
  return out;
}

namespace {

std::string set_text(const json& ids) {
  std::string s = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ", ";
    s += ids[i].get<std::string>();
  }
  return s + "}";
}

std::string formula_of(const json& section, const std::string& id) {
  for (const auto& r : section["requirements"]) {
    if (r["id"] == id) return r["formula"].get<std::string>();
  }
  return {};
}

}  // namespace

std::string render_text(const json& report) {
  std::ostringstream os;
  const std::string command = report.value("command", "");
  if (report.contains("error")) {
    os << "error: " << report["error"]["message"].get<std::string>() << "\n";
    return os.str();
  }
  if (command == "check" || command == "redundancy") {
    for (const auto& s : report["sections"]) {
      const std::string name = s["section"].get<std::string>();
      os << "[" << name << "] " << s["requirements"].size() << " requirements\n";
      if (command == "check") {
        if (s["minimal_inconsistent"].empty()) os << "  consistent\n";
        for (const auto& m : s["minimal_inconsistent"]) {
          os << "  inconsistent: " << set_text(m) << "\n";
          for (const auto& id : m) {
            os << "    " << id.get<std::string>() << ": " << formula_of(s, id.get<std::string>()) << "\n";
          }
        }
      } else {
        if (s["redundancies"].empty()) os << "  no redundancy\n";
        for (const auto& r : s["redundancies"]) {
          const std::string target = r["target"].get<std::string>();
          os << "  redundant: " << set_text(r["witness"]) << " => " << target << "\n";
          os << "    " << target << ": " << formula_of(s, target) << "\n";
        }
      }
      for (const auto& u : s["undecided"]) {
        os << "  undecided: " << set_text(u["requirements"]);
        if (!u["target"].is_null()) os << " => " << u["target"].get<std::string>();
        os << " (" << u["reason"].get<std::string>() << ")\n";
      }
      if (s.contains("stats")) {
        os << "  checks: " << s["stats"]["checks_performed"] << " of " << s["stats"]["checks_possible"] << ", "
           << s["stats"]["seconds"] << " s\n";
      }
    }
    os << report["verdict"].get<std::string>() << "\n";
  } else if (command == "vacuity") {
    for (const auto& inj : report["injected"]) {
      os << "injected " << inj["id"].get<std::string>() << ": " << inj["formula"].get<std::string>() << "\n";
    }
    for (const auto& inj : report["dropped"]) {
      os << "dropped " << inj["id"].get<std::string>() << ": " << inj["formula"].get<std::string>() << "\n";
    }
    for (const auto& d : report["diagnostics"]) os << "note: " << d.get<std::string>() << "\n";
  } else if (command == "suggest" || command == "coverage") {
    os << "baseline coverage: " << report["baseline"]["percent"].get<std::string>() << "% ("
       << report["baseline"]["value"].get<std::string>() << ", " << report["baseline_paths"] << " paths)\n";
    if (report.contains("rounds")) {
      for (const auto& r : report["rounds"]) {
        os << "round " << r["round"] << ": " << r["formula"].get<std::string>() << "  coverage "
           << r["coverage"]["percent"].get<std::string>() << "% (" << r["coverage"]["value"].get<std::string>()
           << ")\n";
      }
      for (const auto& a : report["accepted"]) {
        os << "accepted " << a["id"].get<std::string>() << ": " << a["formula"].get<std::string>() << "\n";
      }
    }
    for (const auto& d : report["diagnostics"]) os << "note: " << d.get<std::string>() << "\n";
    if (report.contains("stats")) os << "time: " << report["stats"]["seconds"] << " s\n";
  } else if (command == "translate") {
    os << report["automaton"].get<std::string>();
  }
  return os.str();
}

}  // namespace ltlsanity::cli
