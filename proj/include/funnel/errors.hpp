#ifndef FUNNEL_ERRORS_HPP
#define FUNNEL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace funnel {

struct SyntaxError : std::runtime_error {
    std::size_t pos;
    SyntaxError(std::size_t p, const std::string& msg)
        : std::runtime_error("syntax error at position " + std::to_string(p) + ": " + msg), pos(p) {}
};

struct DimensionError : std::runtime_error {
    std::size_t pos;
    DimensionError(std::size_t p, const std::string& msg)
        : std::runtime_error("dimension error at position " + std::to_string(p) + ": " + msg), pos(p) {}
};

struct NotInDomain : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateSplit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotProvenUnique : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParameterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace funnel

#endif
