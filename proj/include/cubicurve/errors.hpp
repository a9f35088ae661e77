#pragma once

#include <stdexcept>
#include <string>

namespace cubicurve {

// Base of every library failure. `name()` is the short error tag printed by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define CUBICURVE_ERROR(Type)                                                   \
    class Type : public Error {                                                 \
    public:                                                                     \
        explicit Type(const std::string& what = {}) : Error(#Type, what) {}     \
    }

CUBICURVE_ERROR(ZeroSeries);
CUBICURVE_ERROR(InconsistentSeed);
CUBICURVE_ERROR(NotACenter);
CUBICURVE_ERROR(SingularSystem);
CUBICURVE_ERROR(NoProgress);
CUBICURVE_ERROR(NotPowerOfTwo);
CUBICURVE_ERROR(Inconsistent);
CUBICURVE_ERROR(LevelAmbiguous);
CUBICURVE_ERROR(NotEscaping);
CUBICURVE_ERROR(Overflow);
CUBICURVE_ERROR(AmbiguousKneading);
CUBICURVE_ERROR(RootFindingStalled);
CUBICURVE_ERROR(UnmatchedRoot);
CUBICURVE_ERROR(OrdRoundingAmbiguous);
CUBICURVE_ERROR(StepCollapse);
CUBICURVE_ERROR(SheetMismatch);
CUBICURVE_ERROR(InvalidArgument);

#undef CUBICURVE_ERROR

// Carries the offending index so callers can report which coordinate failed.
class SeedRejected : public Error {
public:
    SeedRejected(int j, const std::string& what)
        : Error("SeedRejected", "j=" + std::to_string(j) + " " + what), j_(j) {}
    int index() const noexcept { return j_; }

private:
    int j_;
};

}  // namespace cubicurve
