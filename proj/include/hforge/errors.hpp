#pragma once

#include <stdexcept>
#include <string>

namespace hforge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define HFORGE_ERROR(Name)                                  \
    class Name : public Error {                             \
    public:                                                 \
        explicit Name(const std::string &what)              \
            : Error(std::string(#Name ": ") + what) {}      \
    };

HFORGE_ERROR(MalformedExpression)
HFORGE_ERROR(DimensionMismatch)
HFORGE_ERROR(UnknownCase)
HFORGE_ERROR(BadDimension)
HFORGE_ERROR(EmptyInput)
HFORGE_ERROR(MixedBlockOrder)
HFORGE_ERROR(BadModel)
HFORGE_ERROR(WindowExceeded)
HFORGE_ERROR(OrderExceeded)
HFORGE_ERROR(BadSpec)
HFORGE_ERROR(NotPolynomialInScale)
HFORGE_ERROR(SchemaMismatch)
HFORGE_ERROR(ClosureLimit)

#undef HFORGE_ERROR

} // namespace hforge
