#include "slideocam/error.hpp"

namespace slideocam {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::EtaSingular: return "EtaSingular";
        case ErrorKind::RollerBlocksCam: return "RollerBlocksCam";
        case ErrorKind::NoRootFound: return "NoRootFound";
        case ErrorKind::PressureAngleSingular: return "PressureAngleSingular";
        case ErrorKind::InfeasibleCamCount: return "InfeasibleCamCount";
        case ErrorKind::ForceSingular: return "ForceSingular";
        case ErrorKind::DegenerateContact: return "DegenerateContact";
        case ErrorKind::InfeasibleProfile: return "InfeasibleProfile";
        case ErrorKind::PerturbationInfeasible: return "PerturbationInfeasible";
    }
    return "Unknown";
}

}  // namespace slideocam
