#pragma once

#include <string>

#include "hforge/diffpoly.hpp"
#include "hforge/liealg.hpp"
#include "hforge/operator.hpp"

namespace hforge::latex {

// u_{i}, u_{i,x}, u_{i,xx}, ...
std::string jet(int comp, int order);
std::string render(const DiffPoly &p);
std::string render(const FlowVector &v); // column pmatrix
std::string render(const OperatorExpr &op);
std::string render(const ConstMatrix &m);

} // namespace hforge::latex
