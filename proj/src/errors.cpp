#include "densityk/errors.hpp"

namespace densityk {

std::string error_kind(const std::exception& e) {
    // Most derived first.
    if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
    if (dynamic_cast<const SchemaError*>(&e)) return "SchemaError";
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const InvalidCoordinate*>(&e)) return "InvalidCoordinate";
    if (dynamic_cast<const MissingTruth*>(&e)) return "MissingTruth";
    if (dynamic_cast<const EmptyInput*>(&e)) return "EmptyInput";
    if (dynamic_cast<const InsufficientPoints*>(&e)) return "InsufficientPoints";
    if (dynamic_cast<const DegenerateCentroid*>(&e)) return "DegenerateCentroid";
    if (dynamic_cast<const CombinationExplosion*>(&e)) return "CombinationExplosion";
    if (dynamic_cast<const NoAnchors*>(&e)) return "NoAnchors";
    if (dynamic_cast<const RejectionOverflow*>(&e)) return "RejectionOverflow";
    if (dynamic_cast<const InputError*>(&e)) return "InputError";
    if (dynamic_cast<const AlgorithmError*>(&e)) return "AlgorithmError";
    return "Error";
}

} // namespace densityk
