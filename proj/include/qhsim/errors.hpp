#pragma once

#include <stdexcept>
#include <string>

namespace qhsim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

// Invalid input: bad parameters, wrong region, mismatched shapes.
class InputError : public Error {
public:
    using Error::Error;
};

// Failure discovered while computing on valid-looking input.
class NumericalError : public Error {
public:
    using Error::Error;
};

#define QHSIM_DEFINE_ERROR(Name, Base)                                   \
    class Name : public Base {                                           \
    public:                                                              \
        using Base::Base;                                                \
        const char* kind() const noexcept override { return #Name; }     \
    };

QHSIM_DEFINE_ERROR(RegionError, InputError)
QHSIM_DEFINE_ERROR(DomainError, InputError)
QHSIM_DEFINE_ERROR(DimensionError, InputError)

QHSIM_DEFINE_ERROR(NotPositiveDefinite, NumericalError)
QHSIM_DEFINE_ERROR(SingularMap, NumericalError)
QHSIM_DEFINE_ERROR(DegenerateObstruction, NumericalError)
QHSIM_DEFINE_ERROR(StepTooLarge, NumericalError)
QHSIM_DEFINE_ERROR(ProfileDomainError, NumericalError)
QHSIM_DEFINE_ERROR(PositivityLost, NumericalError)

#undef QHSIM_DEFINE_ERROR

}  // namespace qhsim
