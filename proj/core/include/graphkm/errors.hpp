#ifndef GRAPHKM_ERRORS_HPP
#define GRAPHKM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace graphkm {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mismatched attribute dimensions, incompatible paddings, malformed shapes.
struct DimensionError : Error {
    using Error::Error;
};

// Invalid run parameters (k out of range, bad matcher choice, ...).
struct ConfigError : Error {
    using Error::Error;
};

// Malformed dataset or manifest text; message carries the line number.
struct ParseError : Error {
    using Error::Error;
};

// Guard against combinatorial blow-up (exact matcher or brute-force mean on
// inputs that are too large). Callers may override where a --force exists.
struct ScaleGuardError : Error {
    using Error::Error;
};

// Operation that needs a non-empty sample received an empty one.
struct EmptySampleError : Error {
    using Error::Error;
};

// Graduated assignment produced non-finite values; retry with smaller beta0.
struct AnnealingDivergedError : Error {
    using Error::Error;
};

// Label-dependent evaluation requested on an unlabeled dataset.
struct LabelsRequiredError : Error {
    using Error::Error;
};

// Filesystem failures (unreadable input, unwritable output path).
struct IoError : Error {
    using Error::Error;
};

}  // namespace graphkm

#endif
