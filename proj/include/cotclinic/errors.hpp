#pragma once

#include <stdexcept>
#include <string>

namespace cotclinic {

// Common base so callers can catch toolkit failures in one place.
class ClinicError : public std::runtime_error {
public:
    explicit ClinicError(const std::string& msg) : std::runtime_error(msg) {}
};

// -- task generation / solving --------------------------------------------
class InvalidDifficulty : public ClinicError {
public:
    explicit InvalidDifficulty(const std::string& msg) : ClinicError(msg) {}
};
class InvalidCharacter : public ClinicError {
public:
    explicit InvalidCharacter(const std::string& msg) : ClinicError(msg) {}
};
class InvalidDate : public ClinicError {
public:
    explicit InvalidDate(const std::string& msg) : ClinicError(msg) {}
};
class SpanTooLarge : public ClinicError {
public:
    explicit SpanTooLarge(const std::string& msg) : ClinicError(msg) {}
};
class RaggedGrid : public ClinicError {
public:
    explicit RaggedGrid(const std::string& msg) : ClinicError(msg) {}
};

// -- codebook ---------------------------------------------------------------
class AmbiguousToken : public ClinicError {
public:
    explicit AmbiguousToken(const std::string& msg) : ClinicError(msg) {}
};

// -- datasets ---------------------------------------------------------------
class MissingTrace : public ClinicError {
public:
    explicit MissingTrace(const std::string& msg) : ClinicError(msg) {}
};

// -- scoring backends -------------------------------------------------------
class BackendUnavailable : public ClinicError {
public:
    explicit BackendUnavailable(const std::string& msg) : ClinicError(msg) {}
};
class AnswerSpanMismatch : public ClinicError {
public:
    explicit AnswerSpanMismatch(const std::string& msg) : ClinicError(msg) {}
};
class Timeout : public ClinicError {
public:
    explicit Timeout(const std::string& msg) : ClinicError(msg) {}
};
class BackendCannotGenerate : public ClinicError {
public:
    explicit BackendCannotGenerate(const std::string& msg) : ClinicError(msg) {}
};

// -- interventions ----------------------------------------------------------
class ParaphraserUnavailable : public ClinicError {
public:
    explicit ParaphraserUnavailable(const std::string& msg) : ClinicError(msg) {}
};
class FillerGenerationFailed : public ClinicError {
public:
    explicit FillerGenerationFailed(const std::string& msg) : ClinicError(msg) {}
};

// -- metrics / stats ---------------------------------------------------------
class NonNegativeLogProb : public ClinicError {
public:
    explicit NonNegativeLogProb(const std::string& msg) : ClinicError(msg) {}
};
class InsufficientSamples : public ClinicError {
public:
    explicit InsufficientSamples(const std::string& msg) : ClinicError(msg) {}
};

// -- configuration ------------------------------------------------------------
class ConfigError : public ClinicError {
public:
    explicit ConfigError(const std::string& msg) : ClinicError(msg) {}
};

}  // namespace cotclinic
