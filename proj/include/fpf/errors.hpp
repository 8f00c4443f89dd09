#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fpf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
    std::size_t node;
    explicit DivisionByZero(std::size_t n)
        : Error("division by zero at node #" + std::to_string(n)), node(n) {}
};

struct InvalidWiring : Error { using Error::Error; };
struct SlaterViolation : Error { using Error::Error; };
struct MissingWitness : Error { using Error::Error; };
struct SizeLimit : Error { using Error::Error; };
struct DimensionTooLarge : Error { using Error::Error; };
struct DivergedToNaN : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };

struct ParseError : Error {
    std::size_t line, column;
    ParseError(const std::string& what, std::size_t l, std::size_t c)
        : Error(std::to_string(l) + ":" + std::to_string(c) + ": " + what), line(l), column(c) {}
};

}  // namespace fpf
