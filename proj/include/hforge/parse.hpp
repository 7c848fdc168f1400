#pragma once

#include <string>

#include "hforge/diffpoly.hpp"

namespace hforge {

// Reads the plain-text form written by DiffPoly::str(), and general sums,
// products, powers and parentheses over the same symbols. I(...) is the
// antiderivative. With components > 0, jets u_i with i > components are
// rejected. Throws MalformedExpression.
DiffPoly parse_poly(const std::string &text, int components = 0);

} // namespace hforge
