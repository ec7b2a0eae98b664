#include "ccm/error.hpp"

namespace ccm {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::NonFiniteValue: return "NonFiniteValue";
        case Errc::TooShort: return "TooShort";
        case Errc::EmptyManifold: return "EmptyManifold";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::DegenerateOrbit: return "DegenerateOrbit";
        case Errc::ManifoldTooSmall: return "ManifoldTooSmall";
        case Errc::InsufficientNeighbors: return "InsufficientNeighbors";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::TooFewPoints: return "TooFewPoints";
        case Errc::LibraryTooLarge: return "LibraryTooLarge";
        case Errc::ConfigInvalid: return "ConfigInvalid";
        case Errc::InsufficientLValues: return "InsufficientLValues";
        case Errc::WorkerPanic: return "WorkerPanic";
        case Errc::MissingColumn: return "MissingColumn";
        case Errc::RaggedRows: return "RaggedRows";
        case Errc::ParseError: return "ParseError";
        case Errc::IoError: return "IoError";
        case Errc::UnknownScenario: return "UnknownScenario";
        case Errc::MalformedSkillsFile: return "MalformedSkillsFile";
    }
    return "Unknown";
}

}  // namespace ccm
