#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coco {

/// Base of all library errors. The category decides the CLI exit code.
class Error : public std::runtime_error {
public:
    enum class Category { input, calibration, numerical };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }

private:
    Category category_;
};

// Input-side failures (exit code 1).

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(Category::input, what) {}
};

class InvalidInterval : public Error {
public:
    explicit InvalidInterval(const std::string& what) : Error(Category::input, what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(Category::input, source + ":" + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& what) : Error(Category::input, what) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(Category::input, what) {}
};

// Numerical failures (exit code 3).

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(Category::numerical, what) {}
};

class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& what) : Error(Category::numerical, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(Category::numerical, what) {}
};

// Calibration failures (exit code 2).

class CalibrationError : public Error {
public:
    explicit CalibrationError(const std::string& what) : Error(Category::calibration, what) {}
};

} // namespace coco
