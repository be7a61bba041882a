#pragma once

#include <stdexcept>
#include <string>

namespace hypercut {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateInput : Error {
    using Error::Error;
};
struct NotHyperbolic : Error {
    using Error::Error;
};
struct InvalidSignature : Error {
    using Error::Error;
};
struct ConstructionFailed : Error {
    using Error::Error;
};
struct NoIncenter : Error {
    using Error::Error;
};
struct BudgetExceeded : Error {
    using Error::Error;
};
struct InsufficientDepth : Error {
    using Error::Error;
};
struct TooFewPoints : Error {
    using Error::Error;
};
struct SideExtensionObstruction : Error {
    using Error::Error;
};
struct NoCandidateFound : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace hypercut
