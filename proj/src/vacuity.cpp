#include "ltlsanity/vacuity.hpp"

#include <algorithm>
#include <set>

namespace ltlsanity {

witness_analysis analyse_witnesses(const formula& f) {
  witness_analysis out;
  const formula base = simplify(f);
  for (const auto& occ : atom_occurrences(f)) {
    if (occ.pol == polarity::mixed) {
      out.diagnostics.push_back("occurrence of '" + occ.name + "' has mixed polarity; skipped");
      continue;
    }
    const formula w =
        simplify(replace_at(f, occ.path, occ.pol == polarity::positive ? formula::ff() : formula::tt()));
    if (w == formula::ff() || w == f || w == base) continue;
    if (std::find(out.witnesses.begin(), out.witnesses.end(), w) != out.witnesses.end()) continue;
    if (w == formula::tt()) {
      out.diagnostics.push_back("replacing an occurrence of '" + occ.name + "' gives true; the formula is valid");
    }
    out.witnesses.push_back(w);
  }
  return out;
}

std::vector<formula> witnesses(const formula& f) { return analyse_witnesses(f).witnesses; }

augment_result augment(const std::vector<requirement>& gamma, const sanity_options& opts) {
  augment_result out;
  out.requirements = gamma;

  std::set<std::string> ids;
  std::vector<formula> existing;
  for (const auto& r : gamma) {
    ids.insert(r.id);
    if (r.formula.is_existential()) existing.push_back(r.formula.body);
  }

  std::vector<injection> fresh;
  for (const auto& r : gamma) {
    if (!r.formula.is_universal()) continue;
    auto analysis = analyse_witnesses(r.formula.body);
    for (auto& d : analysis.diagnostics) out.diagnostics.push_back(r.id + ": " + d);
    for (std::size_t k = 0; k < analysis.witnesses.size(); ++k) {
      const formula& w = analysis.witnesses[k];
      if (w == formula::tt()) continue;
      const formula body = simplify(to_nnf(formula::negation(w)));
      if (std::find(existing.begin(), existing.end(), body) != existing.end()) continue;
      existing.push_back(body);
      std::string id = r.id + ".w" + std::to_string(k + 1);
      while (ids.count(id) != 0) id += "_";
      ids.insert(id);
      const quantified_formula q{quantifier::existential, body};
      fresh.push_back({{id, r.cat, q, id + ": " + render(q)}, r.id, w});
    }
  }
  if (fresh.empty()) return out;

  // Redundancy among all existentials; only fresh ones may be dropped.
  std::vector<quantified_formula> pool;
  std::vector<std::optional<std::size_t>> fresh_index;
  for (const auto& r : gamma) {
    if (!r.formula.is_existential()) continue;
    pool.push_back(r.formula);
    fresh_index.push_back(std::nullopt);
  }
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    pool.push_back(fresh[i].req.formula);
    fresh_index.push_back(i);
  }
  const auto report = find_redundancies(pool, opts);
  for (const auto& u : report.undecided) {
    out.diagnostics.push_back("redundancy of injected requirements undecided: " + u.reason);
  }

  std::vector<bool> removed(pool.size(), false);
  for (std::size_t t = 0; t < pool.size(); ++t) {
    if (!fresh_index[t]) continue;
    for (const auto& r : report.redundancies) {
      if (r.target != t) continue;
      const bool live = std::none_of(r.witness.begin(), r.witness.end(), [&](std::size_t i) { return removed[i]; });
      if (live) {
        removed[t] = true;
        break;
      }
    }
  }
  for (std::size_t t = 0; t < pool.size(); ++t) {
    if (!fresh_index[t]) continue;
    const injection& inj = fresh[*fresh_index[t]];
    if (removed[t]) {
      out.dropped.push_back(inj);
    } else {
      out.injected.push_back(inj);
      out.requirements.push_back(inj.req);
    }
  }
  return out;
}

}  // namespace ltlsanity
