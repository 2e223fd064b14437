#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eitcool {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument or parameter outside the domain of a formula.
class DomainError : public Error {
public:
    using Error::Error;
};

// Operands living on different spaces or with inconsistent shapes.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Integration, linear solve or steady-state failure.
class SolverError : public Error {
public:
    using Error::Error;
};

class FitError : public SolverError {
public:
    using SolverError::SolverError;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& source, std::size_t line, const std::string& field,
                const std::string& message)
        : Error(format(source, line, field, message)), line_(line), field_(field) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string format(const std::string& source, std::size_t line,
                              const std::string& field, const std::string& message) {
        std::string out = source;
        if (line > 0) out += ":" + std::to_string(line);
        if (!field.empty()) out += ": " + field;
        return out + ": " + message;
    }

    std::size_t line_;
    std::string field_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace eitcool
