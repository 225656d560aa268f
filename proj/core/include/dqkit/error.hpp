#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqkit {

/// Base class of every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input text that does not match its file format (JSON syntax, CSV rows,
/// missing or mistyped fields). Carries the 1-based line when known.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& what, std::optional<std::size_t> line = std::nullopt)
        : Error(line ? "line " + std::to_string(*line) + ": " + what : what), line_(line) {}

    std::optional<std::size_t> line() const noexcept { return line_; }

private:
    std::optional<std::size_t> line_;
};

/// Well-formed input that violates a domain rule (single-class data,
/// mismatched option domains, an illegal policy, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The unrolled tree or enumeration would exceed the configured cap.
class CapacityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Reference to a node id that the diagram does not declare.
class UnknownNodeError : public DomainError {
public:
    explicit UnknownNodeError(const std::string& id)
        : DomainError("unknown node '" + id + "'"), id_(id) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

/// Invalid user-supplied parameters (utility inputs, generator config).
class ConfigError : public Error {
public:
    using Error::Error;
};

struct Violation {
    std::string node;
    std::string reason;

    friend bool operator==(const Violation&, const Violation&) = default;
};

class InvalidDiagramError : public DomainError {
public:
    explicit InvalidDiagramError(std::vector<Violation> violations);

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

} // namespace dqkit
