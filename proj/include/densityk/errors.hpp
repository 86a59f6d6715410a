#pragma once

#include <stdexcept>
#include <string>

namespace densityk {

// Two families: InputError (bad files, schemas, flags; CLI exit 1) and
// AlgorithmError (inputs the algorithm cannot handle; CLI exit 2).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
    using Error::Error;
};

class AlgorithmError : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    using InputError::InputError;
};

class SchemaError : public InputError {
public:
    using InputError::InputError;
};

class ConfigError : public InputError {
public:
    using InputError::InputError;
};

class InvalidCoordinate : public InputError {
public:
    using InputError::InputError;
};

class MissingTruth : public InputError {
public:
    using InputError::InputError;
};

class EmptyInput : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

class InsufficientPoints : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

class DegenerateCentroid : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

class CombinationExplosion : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

class NoAnchors : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

class RejectionOverflow : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

/// Short machine-readable tag for an exception, e.g. "NoAnchors".
std::string error_kind(const std::exception& e);

} // namespace densityk
