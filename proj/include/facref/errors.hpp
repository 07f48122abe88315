#pragma once

#include <stdexcept>
#include <string>

namespace facref {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define FACREF_ERROR(Name)                  \
    class Name : public Error {             \
    public:                                 \
        using Error::Error;                 \
    }

FACREF_ERROR(DegenerateGeometry);
FACREF_ERROR(NotAFacade);
FACREF_ERROR(ParseError);
FACREF_ERROR(SchemaError);
FACREF_ERROR(ConfigError);
FACREF_ERROR(EmptyTraversal);
FACREF_ERROR(InsufficientNeighborhood);
FACREF_ERROR(FitError);
FACREF_ERROR(LinkError);
FACREF_ERROR(SpecError);

#undef FACREF_ERROR

// Raised by the pipeline driver; wraps the failing stage's exception.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& cause)
        : Error(stage + ": " + cause), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace facref
