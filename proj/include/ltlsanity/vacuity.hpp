#pragma once

#include <string>
#include <vector>

#include "ltlsanity/formula.hpp"
#include "ltlsanity/sanity.hpp"

namespace ltlsanity {

struct witness_analysis {
  /// Simplified witnesses in occurrence order, without duplicates.
  std::vector<formula> witnesses;
  /// Mixed-polarity occurrences and witnesses that simplify to true.
  std::vector<std::string> diagnostics;
};

/// Vacuity witnesses of `f`: each pure-polarity atom occurrence replaced by
/// false (positive) or true (negative), then simplified. Witnesses equal to
/// `f` or to false are dropped.
witness_analysis analyse_witnesses(const formula& f);

std::vector<formula> witnesses(const formula& f);

struct injection {
  requirement req;  // existential negation of `witness`
  std::string source_id;
  formula witness;
};

struct augment_result {
  /// The input requirements followed by the kept injections.
  std::vector<requirement> requirements;
  std::vector<injection> injected;
  /// Injections removed because another existential implies them.
  std::vector<injection> dropped;
  std::vector<std::string> diagnostics;
};

/// Adds the negated witnesses of every universal requirement as existential
/// requirements with ids `<id>.w1`, `<id>.w2`, ...
augment_result augment(const std::vector<requirement>& gamma, const sanity_options& opts = {});

}  // namespace ltlsanity
