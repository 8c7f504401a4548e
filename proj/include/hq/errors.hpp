#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hq {

/// Base class for every failure the library reports.  The CLI maps the
/// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// λ(η) left the Garding cone Γ_k.  `node` is set when the failure was found
/// while scanning a discretized field.
class ConeViolation : public Error {
public:
    explicit ConeViolation(const std::string& what,
                           std::optional<std::size_t> node = std::nullopt)
        : Error(what), node_(node) {}
    [[nodiscard]] std::optional<std::size_t> node() const { return node_; }

private:
    std::optional<std::size_t> node_;
};

class DegenerateJet : public Error {
public:
    using Error::Error;
};

class NonpositiveF : public Error {
public:
    using Error::Error;
};

class SamplingExhausted : public Error {
public:
    using Error::Error;
};

class TooCoarse : public Error {
public:
    using Error::Error;
};

class SizeMismatch : public Error {
public:
    using Error::Error;
};

/// Syntax error in a prescription; `position` is a byte offset into the source.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at offset " + std::to_string(position)), position_(position) {}
    [[nodiscard]] std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class UnknownIdentifier : public ParseError {
public:
    UnknownIdentifier(const std::string& name, std::size_t position)
        : ParseError("unknown identifier '" + name + "'", position), name_(name) {}
    [[nodiscard]] const std::string& name() const { return name_; }

private:
    std::string name_;
};

/// Numeric failure while evaluating a prescription (log of a nonpositive
/// value, division by zero, ...).  `subexpression` is the offending node
/// rendered back to text.
class EvalError : public Error {
public:
    EvalError(const std::string& what, std::string subexpression)
        : Error(what + " in '" + subexpression + "'"), subexpression_(std::move(subexpression)) {}
    [[nodiscard]] const std::string& subexpression() const { return subexpression_; }

private:
    std::string subexpression_;
};

class BadAnnulus : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

/// The continuation step size dropped below dt_min.  Carries the last
/// accepted parameter value and field so callers can still export them.
class ContinuationStalled : public Error {
public:
    ContinuationStalled(const std::string& what, double last_t, std::vector<double> last_rho)
        : Error(what), last_t_(last_t), last_rho_(std::move(last_rho)) {}
    [[nodiscard]] double last_t() const { return last_t_; }
    [[nodiscard]] const std::vector<double>& last_rho() const { return last_rho_; }

private:
    double last_t_;
    std::vector<double> last_rho_;
};

/// An a priori bound that must hold for a validated problem was observed
/// to fail on an accepted continuation step.
class MonitorViolation : public Error {
public:
    using Error::Error;
};

class ValidationFailed : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::string key = {}, int line = 0)
        : Error(format(what, key, line)), key_(std::move(key)), line_(line) {}
    [[nodiscard]] const std::string& key() const { return key_; }
    [[nodiscard]] int line() const { return line_; }

private:
    static std::string format(const std::string& what, const std::string& key, int line) {
        std::string out = what;
        if (!key.empty()) out += " [" + key + "]";
        if (line > 0) out += " (line " + std::to_string(line) + ")";
        return out;
    }
    std::string key_;
    int line_;
};

class UnsupportedDimension : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace hq
