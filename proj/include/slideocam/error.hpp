#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slideocam {

enum class ErrorKind {
    InvalidArgument,
    EtaSingular,
    RollerBlocksCam,
    NoRootFound,
    PressureAngleSingular,
    InfeasibleCamCount,
    ForceSingular,
    DegenerateContact,
    InfeasibleProfile,
    PerturbationInfeasible,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind. Geometric infeasibility that is
/// reported as data (feasibility reports, candidate flags) never throws.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace slideocam
