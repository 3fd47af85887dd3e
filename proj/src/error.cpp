#include "metro/error.hpp"

namespace metro {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::MissingDensity: return "MissingDensity";
    case ErrorKind::InvalidPolygon: return "InvalidPolygon";
    case ErrorKind::NegativeVisitors: return "NegativeVisitors";
    case ErrorKind::InvalidCoordinate: return "InvalidCoordinate";
    case ErrorKind::GeneratorOutOfRegion: return "GeneratorOutOfRegion";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::LoopInLine: return "LoopInLine";
    case ErrorKind::LineTooShort: return "LineTooShort";
    case ErrorKind::InvalidStationIndex: return "InvalidStationIndex";
    case ErrorKind::InvalidInitialPopulation: return "InvalidInitialPopulation";
    case ErrorKind::FitnessNotFinite: return "FitnessNotFinite";
    case ErrorKind::InvalidGenome: return "InvalidGenome";
    case ErrorKind::TooFewStations: return "TooFewStations";
    case ErrorKind::RepairFailed: return "RepairFailed";
    case ErrorKind::NoFeasibleIndividual: return "NoFeasibleIndividual";
    case ErrorKind::Io: return "IoError";
  }
  return "UnknownError";
}

}  // namespace metro
