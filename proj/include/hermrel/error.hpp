#pragma once

#include <stdexcept>
#include <string>

namespace hermrel {

enum class Errc {
    InvalidArgument,
    ParseError,
    NonPrime,
    ReducibleModulus,
    FieldTooLarge,
    DivisionByZero,
    ZeroInput,
    ZeroAlpha,
    NormNotOne,
    SingularMatrix,
    SingularT,
    EqualPoints,
    ConcurrentLines,
    PointNotOnCurve,
    NotHermitian,
    EmbeddingUnavailable,
    TooFewInflexions,
    ShapeAssertionFailed,
    NotTypeB,
    NotApplicable,
    MethodUnavailable,
    BudgetExceeded,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace hermrel
