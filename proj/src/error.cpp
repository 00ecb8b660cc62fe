#include "hermrel/error.hpp"

namespace hermrel {

const char* to_string(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::ParseError: return "ParseError";
        case Errc::NonPrime: return "NonPrime";
        case Errc::ReducibleModulus: return "ReducibleModulus";
        case Errc::FieldTooLarge: return "FieldTooLarge";
        case Errc::DivisionByZero: return "DivisionByZero";
        case Errc::ZeroInput: return "ZeroInput";
        case Errc::ZeroAlpha: return "ZeroAlpha";
        case Errc::NormNotOne: return "NormNotOne";
        case Errc::SingularMatrix: return "SingularMatrix";
        case Errc::SingularT: return "SingularT";
        case Errc::EqualPoints: return "EqualPoints";
        case Errc::ConcurrentLines: return "ConcurrentLines";
        case Errc::PointNotOnCurve: return "PointNotOnCurve";
        case Errc::NotHermitian: return "NotHermitian";
        case Errc::EmbeddingUnavailable: return "EmbeddingUnavailable";
        case Errc::TooFewInflexions: return "TooFewInflexions";
        case Errc::ShapeAssertionFailed: return "ShapeAssertionFailed";
        case Errc::NotTypeB: return "NotTypeB";
        case Errc::NotApplicable: return "NotApplicable";
        case Errc::MethodUnavailable: return "MethodUnavailable";
        case Errc::BudgetExceeded: return "BudgetExceeded";
    }
    return "Unknown";
}

}  // namespace hermrel
