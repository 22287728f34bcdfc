#pragma once

#include <stdexcept>
#include <string>

namespace crashlens {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ingest
struct NetworkError : Error { using Error::Error; };
struct SymbolUnknown : Error { using Error::Error; };
struct HistoryUnavailable : Error { using Error::Error; };
struct GapTooLarge : Error { using Error::Error; };
struct MissingSymbol : Error { using Error::Error; };

// panel / stats
struct NonPositivePrice : Error { using Error::Error; };
struct TooFewObservations : Error { using Error::Error; };
struct EmptyWindow : Error { using Error::Error; };

// correlation / smoothing
struct InvalidParameter : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct UnknownAsset : Error { using Error::Error; };

// tmfg / centrality
struct TooFewVertices : Error { using Error::Error; };
struct NonSymmetricInput : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };

// regression
struct RankDeficient : Error { using Error::Error; };
struct LagTooLarge : Error { using Error::Error; };
struct TooFewAssetsRemain : Error { using Error::Error; };

// microstructure
struct UnorderedInput : Error { using Error::Error; };

// cli / pipeline
struct MissingData : Error { using Error::Error; };
struct MissingStageOutput : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace crashlens
