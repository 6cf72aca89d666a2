#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ucaprio {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unreadable or missing input/output file.
class FileError : public Error {
public:
    explicit FileError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// Malformed row or field. Line numbers are 1-based; 0 when not applicable.
class FormatError : public Error {
public:
    FormatError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
          source_(source), line_(line) {}
    const std::string& source() const { return source_; }
    std::size_t line() const { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

enum class ViolationKind {
    NoLossLink,
    UnresolvedLossLink,
    UnresolvedController,
    UnresolvedUca,
    DuplicateId,
    DuplicatePms,
    DuplicateCif,
    CifOrdering,
    DuplicateLevel,
    ScoreOutOfRange,
    InvalidValue,
};

const char* to_string(ViolationKind kind);

struct Violation {
    std::string where;  // "ucas.csv:4" or an id
    ViolationKind kind;
    std::string message;

    std::string describe() const;
};

bool is_link_violation(ViolationKind kind);

// Dataset-level invariant failures, carrying every violation found.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

// A ValidationError where at least one violation is a dangling id.
class LinkError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnknownIntensity : public Error {
public:
    using Error::Error;
};

class NoExperts : public Error {
public:
    using Error::Error;
};

class EmptyLinks : public Error {
public:
    using Error::Error;
};

class UnresolvedLink : public Error {
public:
    using Error::Error;
};

class UnresolvedController : public Error {
public:
    using Error::Error;
};

class DuplicateLevel : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class AxisDegenerate : public Error {
public:
    using Error::Error;
};

class UnsupportedFormat : public Error {
public:
    using Error::Error;
};

class MissingResults : public Error {
public:
    using Error::Error;
};

} // namespace ucaprio
