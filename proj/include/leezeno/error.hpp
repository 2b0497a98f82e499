// error.hpp - Error codes and the exception type thrown by every leezeno routine

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace leezeno {

enum class Errc {
    InvalidArgument,
    DensityNotPointwise,
    SecondMomentDivergent,
    GoldenRuleUndefined,
    PrincipalValueUnresolvable,
    OnCutAmbiguous,
    NoBranchCut,
    ContinuationUnreliable,
    AtPole,
    PoleNotFound,
    NotADecayPole,
    SpectralWindowTooSmall,
    OracleFailed,
    RateInfinite,
    ReductionDegenerate,
    CascadeSingular,
    ParseError,
    IoError,
};

constexpr std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DensityNotPointwise: return "DensityNotPointwise";
    case Errc::SecondMomentDivergent: return "SecondMomentDivergent";
    case Errc::GoldenRuleUndefined: return "GoldenRuleUndefined";
    case Errc::PrincipalValueUnresolvable: return "PrincipalValueUnresolvable";
    case Errc::OnCutAmbiguous: return "OnCutAmbiguous";
    case Errc::NoBranchCut: return "NoBranchCut";
    case Errc::ContinuationUnreliable: return "ContinuationUnreliable";
    case Errc::AtPole: return "AtPole";
    case Errc::PoleNotFound: return "PoleNotFound";
    case Errc::NotADecayPole: return "NotADecayPole";
    case Errc::SpectralWindowTooSmall: return "SpectralWindowTooSmall";
    case Errc::OracleFailed: return "OracleFailed";
    case Errc::RateInfinite: return "RateInfinite";
    case Errc::ReductionDegenerate: return "ReductionDegenerate";
    case Errc::CascadeSingular: return "CascadeSingular";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace leezeno
