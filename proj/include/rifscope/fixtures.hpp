#pragma once

// Catalog of reference RIFs with exact integer coefficients, used throughout
// the test suite and exposed through the CLI as named inputs.

#include <string>
#include <vector>

#include "rifscope/rif.hpp"

namespace rifscope {

// Names, in catalog order: faveform, smooth3, amy, mbm, minimal-co,
// glued-fave, exceptional, bickel-pascoe.
const std::vector<std::string>& fixture_names();

// The named fixture, validated. Throws UnknownFixture.
Rif get_fixture(const std::string& name);

// All fixtures in catalog order.
const std::vector<Rif>& catalog();

// JSON serialization of one fixture (name, eta, monomial exponents, p).
std::string fixture_to_json(const Rif& f);
Rif fixture_from_json(const std::string& text);

} // namespace rifscope
