#include "zonal/errors.hpp"

namespace zonal {

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

DuplicateError::DuplicateError(std::size_t line, int n, int m)
    : ParseError(line, "duplicate coefficient (" + std::to_string(n) + ", " + std::to_string(m) + ")") {}

}  // namespace zonal
