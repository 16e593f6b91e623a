#pragma once

#include <stdexcept>
#include <string>

namespace cqmac {

// Invariant or compatibility violation (CLI exit code 1).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file or unknown schema (CLI exit code 2).
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Rejection sampling exhausted its attempt budget (CLI exit code 3).
class sampling_error : public std::runtime_error {
public:
    explicit sampling_error(const std::string& what) : std::runtime_error(what) {}
};

// Grid or dimension budget exceeded (CLI exit code 4).
class budget_error : public std::runtime_error {
public:
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical result outside what the tolerances allow (not a user error).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cqmac
