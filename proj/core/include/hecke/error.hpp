#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hecke {

enum class Errc {
  NonPrime,
  DegreeZero,
  ZeroPolynomial,
  UnsupportedCharacteristic,
  NotSupersingular,
  BadTorsionOrder,
  EqualCharacteristic,
  NotAKernel,
  PositiveDiscriminant,
  BadDiscriminant,
  InertPrime,
  SupersingularStart,
  ExcludedJ,
  NotClosed,
  NotSplit,
  ScaleExceeded,
  EvenEll,
  SharedCharacteristic,
  TraceAmbiguous,
  BudgetExhausted,
  NotAUnit,
  ConvergenceDomain,
  PrecisionExhausted,
  ChartEscape,
  SearchExhausted,
  NotOutRegular,
  Reducible,
  Bipartite,
  DepthTooSmall,
  InvalidArgument,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& what);

}  // namespace hecke
