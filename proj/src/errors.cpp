#include "neurotrade/errors.hpp"

namespace nt {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::NonPositivePrice: return "NonPositivePrice";
    case Errc::DuplicateDate: return "DuplicateDate";
    case Errc::ZeroAdjustedClose: return "ZeroAdjustedClose";
    case Errc::EmptySeries: return "EmptySeries";
    case Errc::SeriesTooShort: return "SeriesTooShort";
    case Errc::EmptySplit: return "EmptySplit";
    case Errc::ConstantFeature: return "ConstantFeature";
    case Errc::MissingClass: return "MissingClass";
    case Errc::InvalidTopology: return "InvalidTopology";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
    case Errc::CorruptModel: return "CorruptModel";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NoTrades: return "NoTrades";
    case Errc::SpanTooShort: return "SpanTooShort";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::NoTickersSucceeded: return "NoTickersSucceeded";
    case Errc::MissingUpstreamArtifact: return "MissingUpstreamArtifact";
    case Errc::StaleArtifact: return "StaleArtifact";
    }
    return "UnknownError";
}

} // namespace nt
