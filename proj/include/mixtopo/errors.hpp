#pragma once

#include <stdexcept>
#include <string>

namespace mixtopo {

/// Base class for all library errors. `kind()` is a stable machine-readable
/// name, `exit_code()` the process exit code the CLI maps the error to
/// (2 = invalid input or model, 3 = numerical failure).
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what, int exit_code)
        : std::runtime_error(what), kind_(std::move(kind)), exit_code_(exit_code) {}

    const std::string& kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return exit_code_; }

private:
    std::string kind_;
    int exit_code_;
};

#define MIXTOPO_ERROR(Name, Code)                              \
    class Name : public Error {                                \
    public:                                                    \
        explicit Name(const std::string& what)                 \
            : Error(#Name, what, Code) {}                      \
    };

// Model / input validation failures.
MIXTOPO_ERROR(DimensionMismatch, 2)
MIXTOPO_ERROR(NotPositiveDefinite, 2)
MIXTOPO_ERROR(BadWeights, 2)
MIXTOPO_ERROR(BadSimplexPoint, 2)
MIXTOPO_ERROR(BadArgument, 2)
MIXTOPO_ERROR(NotTwoComponents, 2)
MIXTOPO_ERROR(NotThreeComponents, 2)
MIXTOPO_ERROR(ZeroWeightPair, 2)
MIXTOPO_ERROR(DimensionTooLarge, 2)
MIXTOPO_ERROR(ParseError, 2)
MIXTOPO_ERROR(IoError, 2)
MIXTOPO_ERROR(TooFewRows, 2)

// Numerical / analysis failures.
MIXTOPO_ERROR(DegenerateFrame, 3)
MIXTOPO_ERROR(NotCritical, 3)
MIXTOPO_ERROR(DegenerateCritical, 3)
MIXTOPO_ERROR(CoincidentMeans, 3)
MIXTOPO_ERROR(InternalInconsistency, 3)
MIXTOPO_ERROR(DegenerateFit, 3)

#undef MIXTOPO_ERROR

} // namespace mixtopo
