#pragma once

#include <stdexcept>
#include <string>

namespace hwm {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// u and v parallel: no plane to build a null spin from.
struct DegenerateFrame : Error {
    explicit DegenerateFrame(const std::string& what) : Error(what) {}
};

// Two poles (or quadrature nodes) coincide; the interaction terms are undefined.
struct CoincidentPoles : Error {
    explicit CoincidentPoles(const std::string& what) : Error(what) {}
};

struct NodeCollision : Error {
    explicit NodeCollision(const std::string& what) : Error(what) {}
};

// Recovered spin pair and its conjugate partner disagree beyond tolerance.
struct ConjugacyViolation : Error {
    double mismatch = 0.0;
    ConjugacyViolation(const std::string& what, double m) : Error(what), mismatch(m) {}
};

struct SeparationViolation : Error {
    explicit SeparationViolation(const std::string& what) : Error(what) {}
};

struct InvalidInput : Error {
    explicit InvalidInput(const std::string& what) : Error(what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace hwm
