#pragma once

#include <stdexcept>
#include <string>

namespace quatsplit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define QUATSPLIT_ERROR(Name)                                   \
    class Name : public Error {                                 \
    public:                                                     \
        explicit Name(const std::string& what) : Error(what) {} \
    }

QUATSPLIT_ERROR(InvalidArgument);
QUATSPLIT_ERROR(NonResidue);
QUATSPLIT_ERROR(Inconsistent);
QUATSPLIT_ERROR(DivisionByZero);
QUATSPLIT_ERROR(FieldMismatch);
QUATSPLIT_ERROR(DimensionMismatch);
QUATSPLIT_ERROR(UnsupportedDimension);
QUATSPLIT_ERROR(DependentBasis);
QUATSPLIT_ERROR(NotQuaternion);
QUATSPLIT_ERROR(IndependenceFailure);
QUATSPLIT_ERROR(BadIdealDimension);
QUATSPLIT_ERROR(InternalInconsistency);
QUATSPLIT_ERROR(FactorBudgetExceeded);
QUATSPLIT_ERROR(ZeroCoefficient);

#undef QUATSPLIT_ERROR

}  // namespace quatsplit
