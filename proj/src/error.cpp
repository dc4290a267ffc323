#include "atmos/error.hpp"

namespace atmos {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidTruncation: return "invalid-truncation";
        case ErrorKind::Dimension: return "dimension";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::SingularImpedance: return "singular-impedance";
        case ErrorKind::Elimination: return "elimination";
        case ErrorKind::EigenSolve: return "eigensolve";
        case ErrorKind::DegenerateMode: return "degenerate-mode";
        case ErrorKind::Config: return "config";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

}  // namespace atmos
