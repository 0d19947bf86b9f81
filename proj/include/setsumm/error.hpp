#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace setsumm {

enum class Errc {
  NoHeader,
  NoPriceColumn,
  EmptyTable,
  ParseError,
  UnknownFeature,
  KindMismatch,
  EmptyInput,
  OutOfRange,
  FeatureMismatch,
  InsufficientSupport,
  EmptyList,
  WrongMode,
  EmptySet,
  UnknownProduct,
  DegenerateVariance,
  InvalidN,
  InsufficientData,
  InvalidConfig,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NoHeader: return "NoHeader";
    case Errc::NoPriceColumn: return "NoPriceColumn";
    case Errc::EmptyTable: return "EmptyTable";
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownFeature: return "UnknownFeature";
    case Errc::KindMismatch: return "KindMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::FeatureMismatch: return "FeatureMismatch";
    case Errc::InsufficientSupport: return "InsufficientSupport";
    case Errc::EmptyList: return "EmptyList";
    case Errc::WrongMode: return "WrongMode";
    case Errc::EmptySet: return "EmptySet";
    case Errc::UnknownProduct: return "UnknownProduct";
    case Errc::DegenerateVariance: return "DegenerateVariance";
    case Errc::InvalidN: return "InvalidN";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

// All library failures are reported as setsumm::Error carrying a code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace setsumm
