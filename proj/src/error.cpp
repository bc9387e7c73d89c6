#include "fcp/error.hpp"

namespace fcp {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DegenerateRegressor: return "DegenerateRegressor";
        case ErrorKind::InvalidBandwidth: return "InvalidBandwidth";
        case ErrorKind::ZeroTrace: return "ZeroTrace";
        case ErrorKind::InvalidTruncation: return "InvalidTruncation";
        case ErrorKind::EigenFailure: return "EigenFailure";
        case ErrorKind::TooFewCurves: return "TooFewCurves";
        case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

namespace {

std::string compose(ErrorKind kind, const std::string& stage, const std::string& detail) {
    std::string out(to_string(kind));
    if (!stage.empty()) {
        out += " [" + stage + "]";
    }
    return out + ": " + detail;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> grid_index)
    : std::runtime_error(compose(kind, {}, message)), kind_(kind), detail_(message), grid_index_(grid_index) {}

Error Error::at_stage(std::string stage) const {
    Error copy(kind_, detail_, grid_index_);
    static_cast<std::runtime_error&>(copy) = std::runtime_error(compose(kind_, stage, detail_));
    copy.stage_ = std::move(stage);
    return copy;
}

}  // namespace fcp
