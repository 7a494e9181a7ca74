#pragma once

#include <stdexcept>
#include <string>

namespace liqvap {

// Base of all library errors. name() is the stable identifier the CLI prints
// on the diagnostic stream before exiting with code 2.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

struct InvalidParams : Error {
    explicit InvalidParams(const std::string& w) : Error("InvalidParams", w) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error("DomainError", w) {}
};

struct NonPositiveVolume : Error {
    explicit NonPositiveVolume(const std::string& w) : Error("NonPositiveVolume", w) {}
};

struct ModelMismatch : Error {
    explicit ModelMismatch(const std::string& w) : Error("ModelMismatch", w) {}
};

struct StepFailure : Error {
    explicit StepFailure(const std::string& w) : Error("StepFailure", w) {}
};

struct StabilityViolation : Error {
    explicit StabilityViolation(const std::string& w) : Error("StabilityViolation", w) {}
};

struct SingularHeatCapacity : Error {
    explicit SingularHeatCapacity(const std::string& w) : Error("SingularHeatCapacity", w) {}
};

} // namespace liqvap
