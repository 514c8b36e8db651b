#pragma once

// Randomized identity checks shared by the property test binary and the
// acceptance runner. Each returns how many of its cases failed.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hzeta::testing {

struct PropertyOutcome {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
};

PropertyOutcome prop_product_formula(std::uint64_t seed, int cases);
PropertyOutcome prop_factorization(std::uint64_t seed, int cases);
PropertyOutcome prop_height_by_places(std::uint64_t seed, int cases);
PropertyOutcome prop_translation_invariance(std::uint64_t seed, int cases);
PropertyOutcome prop_pn_degeneration(std::uint64_t seed, int cases);

PropertyOutcome prop_normalize_point(std::uint64_t seed, int cases);
PropertyOutcome prop_anticanonical_closed_form(std::uint64_t seed, int cases);
PropertyOutcome prop_bundle_multiplicativity(std::uint64_t seed, int cases);
PropertyOutcome prop_local_height_lower_bound(std::uint64_t seed, int cases);
PropertyOutcome prop_character_scaling(std::uint64_t seed, int cases);

/// The five suites named by the acceptance criteria.
std::vector<PropertyOutcome> acceptance_properties(std::uint64_t seed, int cases);

}  // namespace hzeta::testing
