#ifndef LOLREC_ERRORS_HPP
#define LOLREC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lolrec {

// Base class for every recoverable error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// Invalid or inconsistent input data: malformed CSV rows, empty inputs,
// out-of-range ratings, degenerate partitions.
class DataError : public Error {
public:
    using Error::Error;
};

// Model construction, persistence, or lookup failures.
class ModelError : public Error {
public:
    using Error::Error;
};

// Game-API client failures, tagged with the failure kind so callers can
// distinguish a missing summoner from an exhausted retry budget.
class ApiError : public Error {
public:
    enum class Kind { config, not_found, rate_limited, protocol };

    ApiError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace lolrec

#endif  // LOLREC_ERRORS_HPP
