#pragma once

#include <stdexcept>
#include <string>

namespace crim {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration or usage. CLI maps these to exit code 1.
class ConfigError : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Unreadable or malformed input data. CLI maps these to exit code 2.
class InputError : public Error {
public:
    using Error::Error;
};

class FileNotFound : public InputError {
public:
    using InputError::InputError;
};

class NotARepository : public InputError {
public:
    using InputError::InputError;
};

class MalformedHeader : public InputError {
public:
    using InputError::InputError;
};

class IoError : public InputError {
public:
    using InputError::InputError;
};

class EmptyInput : public InputError {
public:
    using InputError::InputError;
};

class NonFiniteValue : public InputError {
public:
    using InputError::InputError;
};

class NonpositiveCtd : public InputError {
public:
    using InputError::InputError;
};

class ZeroRate : public InputError {
public:
    using InputError::InputError;
};

class NoCandidates : public InputError {
public:
    using InputError::InputError;
};

// The pipeline produced self-contradictory results. CLI maps these to exit code 3.
class InternalError : public Error {
public:
    using Error::Error;
};

class InternalInconsistency : public InternalError {
public:
    using InternalError::InternalError;
};

class MismatchedCommitSets : public InternalError {
public:
    using InternalError::InternalError;
};

}  // namespace crim
