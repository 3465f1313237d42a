#pragma once

#include <stdexcept>
#include <string>

namespace hdasc {

// Error taxonomy. The numeric code doubles as the process exit code and the
// C API status value: 2 config, 3 checkpoint, 4 runtime.
class Error : public std::runtime_error {
public:
    Error(std::string msg, int code) : std::runtime_error(std::move(msg)), code_(code) {}
    int code() const noexcept { return code_; }

private:
    int code_;
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error("dimension error: " + msg, 4) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error("config error: " + msg, 2) {}
};

class CheckpointError : public Error {
public:
    explicit CheckpointError(const std::string& msg) : Error("checkpoint error: " + msg, 3) {}
};

class FramingError : public Error {
public:
    explicit FramingError(const std::string& msg) : Error("framing error: " + msg, 4) {}
};

class EncodingError : public Error {
public:
    explicit EncodingError(const std::string& msg) : Error("encoding error: " + msg, 4) {}
};

class TrainingDivergenceError : public Error {
public:
    explicit TrainingDivergenceError(const std::string& msg)
        : Error("training divergence: " + msg, 4) {}
};

class DeepFadeError : public Error {
public:
    explicit DeepFadeError(const std::string& msg) : Error("deep fade: " + msg, 4) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error("domain error: " + msg, 4) {}
};

}  // namespace hdasc
