#ifndef GK_ERROR_HPP
#define GK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace gk {

enum class Errc {
    NotPrime,
    MNotEven,
    QuotientNotOdd,
    ReducibleModulus,
    ScaleTooLarge,
    SNotDivisor,
    ZeroInput,
    DivisionByZero,
    SingularMatrix,
    DimensionMismatch,
    BNotNonSquare,
    ABNotInFQ,
    TowerInvalid,
    NonAdmissible,
    ZeroParameter,
    ConventionMismatch,
    SingularTranslation,
    InvalidArgument,
    InternalCheck,
};

const char* errc_name(Errc c);

/// Library error: carries a code mirroring the documented failure modes.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace gk

#endif
