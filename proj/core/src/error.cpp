#include "hecke/error.hpp"

namespace hecke {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonPrime: return "NonPrime";
    case Errc::DegreeZero: return "DegreeZero";
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::UnsupportedCharacteristic: return "UnsupportedCharacteristic";
    case Errc::NotSupersingular: return "NotSupersingular";
    case Errc::BadTorsionOrder: return "BadTorsionOrder";
    case Errc::EqualCharacteristic: return "EqualCharacteristic";
    case Errc::NotAKernel: return "NotAKernel";
    case Errc::PositiveDiscriminant: return "PositiveDiscriminant";
    case Errc::BadDiscriminant: return "BadDiscriminant";
    case Errc::InertPrime: return "InertPrime";
    case Errc::SupersingularStart: return "SupersingularStart";
    case Errc::ExcludedJ: return "ExcludedJ";
    case Errc::NotClosed: return "NotClosed";
    case Errc::NotSplit: return "NotSplit";
    case Errc::ScaleExceeded: return "ScaleExceeded";
    case Errc::EvenEll: return "EvenEll";
    case Errc::SharedCharacteristic: return "SharedCharacteristic";
    case Errc::TraceAmbiguous: return "TraceAmbiguous";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::NotAUnit: return "NotAUnit";
    case Errc::ConvergenceDomain: return "ConvergenceDomain";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::ChartEscape: return "ChartEscape";
    case Errc::SearchExhausted: return "SearchExhausted";
    case Errc::NotOutRegular: return "NotOutRegular";
    case Errc::Reducible: return "Reducible";
    case Errc::Bipartite: return "Bipartite";
    case Errc::DepthTooSmall: return "DepthTooSmall";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace hecke
