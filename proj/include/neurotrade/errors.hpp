#pragma once

#include <stdexcept>
#include <string>

namespace nt {

enum class Errc {
    MalformedHeader,
    MalformedRow,
    NonPositivePrice,
    DuplicateDate,
    ZeroAdjustedClose,
    EmptySeries,
    SeriesTooShort,
    EmptySplit,
    ConstantFeature,
    MissingClass,
    InvalidTopology,
    DimensionMismatch,
    EmptyDataset,
    NonFiniteLoss,
    CorruptModel,
    VersionMismatch,
    LengthMismatch,
    NoTrades,
    SpanTooShort,
    ConfigInvalid,
    NoTickersSucceeded,
    MissingUpstreamArtifact,
    StaleArtifact,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

} // namespace nt
