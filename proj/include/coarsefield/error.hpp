#pragma once

/**
 * @file error.hpp
 * @brief The single exception type of the library and its exit-code map.
 */

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>

namespace coarsefield {

enum class ErrorKind {
    Structural,    ///< malformed input: shapes, unknown identifiers, mismatched spaces
    Precondition,  ///< well-formed input violating an operation's precondition
    Rejected,      ///< input failed a mathematical invariant (e.g. triangle inequality)
    Inconclusive,  ///< finite data cannot decide the question
    Internal       ///< a library invariant failed; indicates a bug
};

const char* to_string(ErrorKind kind);

/// Process exit code for each error class: 1 verdict failure, 2 usage, 3 inconclusive.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, nlohmann::json detail = nullptr)
        : std::runtime_error(what), kind_(kind), detail_(std::move(detail)) {}

    ErrorKind kind() const { return kind_; }
    const nlohmann::json& detail() const { return detail_; }

private:
    ErrorKind kind_;
    nlohmann::json detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what,
                              nlohmann::json detail = nullptr) {
    throw Error(kind, what, std::move(detail));
}

}  // namespace coarsefield
