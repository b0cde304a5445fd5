#pragma once
#include <stdexcept>
#include <string>

namespace minkstat {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

// Point sits inside the lightlike-cone tolerance band.
struct OnConeError : Error {
    explicit OnConeError(const std::string& msg) : Error(msg) {}
};

// |EG - F^2| below the relative degeneracy band.
struct DegenerateMetric : Error {
    explicit DegenerateMetric(const std::string& msg) : Error(msg) {}
};

// <N,X> ~ 0: every alpha solves the stationarity equation at this point.
struct IndeterminateAlpha : Error {
    explicit IndeterminateAlpha(const std::string& msg) : Error(msg) {}
};

struct WrongCausalType : Error {
    explicit WrongCausalType(const std::string& msg) : Error(msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// <w,w> changes sign along the ruling, so w cannot be rescaled to a unit field.
struct NonUnitizableRuling : Error {
    explicit NonUnitizableRuling(const std::string& msg) : Error(msg) {}
};

struct VanishingWPrime : Error {
    explicit VanishingWPrime(const std::string& msg) : Error(msg) {}
};

// Causal class of w or w' changes along the base interval.
struct MixedClass : Error {
    explicit MixedClass(const std::string& msg) : Error(msg) {}
};

// Operation invoked on a chart of the wrong ruling class.
struct ClassMismatch : Error {
    explicit ClassMismatch(const std::string& msg) : Error(msg) {}
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

} // namespace minkstat
