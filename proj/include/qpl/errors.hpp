#pragma once

#include <stdexcept>
#include <string>

namespace qpl {

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define QPL_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what) : Error(#Name, what) {}      \
    };

QPL_DEFINE_ERROR(PrecisionExhausted)
QPL_DEFINE_ERROR(DivisionByZero)
QPL_DEFINE_ERROR(NotAUnit)
QPL_DEFINE_ERROR(DomainError)
QPL_DEFINE_ERROR(UnsupportedOrder)
QPL_DEFINE_ERROR(PoleError)
QPL_DEFINE_ERROR(DivergenceDetected)
QPL_DEFINE_ERROR(NormalizationUnresolved)
QPL_DEFINE_ERROR(NoConsistentNormalization)
QPL_DEFINE_ERROR(TailTooLarge)
QPL_DEFINE_ERROR(InconclusivePrecision)
QPL_DEFINE_ERROR(PreconditionViolated)
QPL_DEFINE_ERROR(BudgetExceeded)
QPL_DEFINE_ERROR(ParseError)

#undef QPL_DEFINE_ERROR

}  // namespace qpl
