#include "fnirenberg/error.hpp"

namespace fnir {

std::string_view kind_name(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "dimension-mismatch";
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::CoincidentPoints: return "coincident-points";
        case ErrorKind::NorthPole: return "north-pole";
        case ErrorKind::ChartOverflow: return "chart-overflow";
        case ErrorKind::Syntax: return "syntax-error";
        case ErrorKind::Domain: return "domain-error";
        case ErrorKind::UnknownVariable: return "unknown-variable";
        case ErrorKind::KNotPositive: return "K-not-positive";
        case ErrorKind::DegenerateK: return "degenerate-K";
        case ErrorKind::AxisDegenerate: return "axis-degenerate";
        case ErrorKind::NotFlat: return "not-flat";
        case ErrorKind::DivergentIntegral: return "divergent-integral";
        case ErrorKind::IntegralFailure: return "integral-failure";
        case ErrorKind::WrongStratum: return "wrong-stratum";
        case ErrorKind::CensusTooLarge: return "census-too-large";
        case ErrorKind::StiffStep: return "stiff-step";
        case ErrorKind::Io: return "io-error";
        case ErrorKind::Usage: return "usage-error";
    }
    return "unknown";
}

}  // namespace fnir
