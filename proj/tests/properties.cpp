#include <doctest.h>

#include "property_checks.hpp"
#include "support.hpp"

using namespace hzeta::testing;

namespace {

void require(const PropertyOutcome& o) {
  INFO(o.name << ": " << o.failures << "/" << o.cases << " failed; " << o.first_failure);
  CHECK(o.cases == kPropertyCases);
  CHECK(o.ok());
}

}  // namespace

TEST_CASE("product formula holds exactly") { require(prop_product_formula(kSeed, kPropertyCases)); }
TEST_CASE("component heights multiply to the O(1) height") { require(prop_factorization(kSeed + 1, kPropertyCases)); }
TEST_CASE("closed global height equals the product of local heights") {
  require(prop_height_by_places(kSeed + 2, kPropertyCases));
}
TEST_CASE("finite local heights are translation invariant") {
  require(prop_translation_invariance(kSeed + 3, kPropertyCases));
}
TEST_CASE("r = 0 local transforms reduce to the projective plane") {
  require(prop_pn_degeneration(kSeed + 4, kPropertyCases));
}
TEST_CASE("normalize_point is idempotent and scale invariant") {
  require(prop_normalize_point(kSeed + 5, kPropertyCases));
}
TEST_CASE("anticanonical closed form matches the bundle height") {
  require(prop_anticanonical_closed_form(kSeed + 6, kPropertyCases));
}
TEST_CASE("bundle heights are multiplicative in s") { require(prop_bundle_multiplicativity(kSeed + 7, kPropertyCases)); }
TEST_CASE("finite local heights are at least 1") { require(prop_local_height_lower_bound(kSeed + 8, kPropertyCases)); }
TEST_CASE("character class is stable under scaling") { require(prop_character_scaling(kSeed + 9, kPropertyCases)); }
