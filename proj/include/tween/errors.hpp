#ifndef TWEEN_ERRORS_HPP
#define TWEEN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tween {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct DegenerateInputError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct InvalidCriteriaError : Error { using Error::Error; };
struct EmptyPopulationError : Error { using Error::Error; };
struct DomainGenerationError : Error { using Error::Error; };
struct NumericalError : Error { using Error::Error; };
struct MissingLabelError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// Malformed input file; carries the byte offset reported by the parser.
struct ParseError : Error {
    ParseError(const std::string& file, std::size_t offset, const std::string& what)
        : Error(file + ": parse error at byte " + std::to_string(offset) + ": " + what),
          file(file), offset(offset) {}
    std::string file;
    std::size_t offset;
};

} // namespace tween

#endif
