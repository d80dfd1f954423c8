#ifndef IQCOH_ERRORS_HPP
#define IQCOH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace iqcoh {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonHermitianError : Error { using Error::Error; };
struct DimensionMismatchError : Error { using Error::Error; };
struct NotAStateError : Error { using Error::Error; };
struct SupportViolationError : Error { using Error::Error; };
struct InfiniteValueError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct NotIsometryError : Error { using Error::Error; };
struct RankTooHighError : Error { using Error::Error; };
struct NormalizationError : Error { using Error::Error; };
struct IndexOutOfRangeError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct UnknownMeasureError : Error { using Error::Error; };
struct MaxIterationsError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

} // namespace iqcoh

#endif
