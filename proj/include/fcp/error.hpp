#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fcp {

enum class ErrorKind {
    InvalidArgument,
    DegenerateRegressor,
    InvalidBandwidth,
    ZeroTrace,
    InvalidTruncation,
    EigenFailure,
    TooFewCurves,
    Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

/**
 * Error raised by every stage of the pipeline.
 *
 * Carries the failure kind, the pipeline stage it was raised from (empty when
 * a module is called directly) and, for regressor degeneracy, the offending
 * grid index.
 */
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> grid_index = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& stage() const noexcept { return stage_; }
    const std::string& detail() const noexcept { return detail_; }
    std::optional<std::size_t> grid_index() const noexcept { return grid_index_; }

    /// Copy of this error tagged with the stage it surfaced from.
    Error at_stage(std::string stage) const;

private:
    ErrorKind kind_;
    std::string detail_;
    std::string stage_;
    std::optional<std::size_t> grid_index_;
};

}  // namespace fcp
