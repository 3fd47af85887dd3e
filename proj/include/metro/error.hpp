#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace metro {

enum class ErrorKind {
  Parse,
  MissingDensity,
  InvalidPolygon,
  NegativeVisitors,
  InvalidCoordinate,
  GeneratorOutOfRegion,
  EmptyGrid,
  InvalidConfig,
  LoopInLine,
  LineTooShort,
  InvalidStationIndex,
  InvalidInitialPopulation,
  FitnessNotFinite,
  InvalidGenome,
  TooFewStations,
  RepairFailed,
  NoFeasibleIndividual,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can branch without parsing text.
class MetroError : public std::runtime_error {
 public:
  MetroError(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace metro
