#ifndef RPOD_CORE_HPP
#define RPOD_CORE_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace rpod {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Units are km, km/s, rad/s and seconds everywhere in this library.
inline constexpr double kMuEarth = 398600.4418;       // km^3/s^2
inline constexpr double kEarthRadius = 6378.137;      // km
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class ErrorKind {
    DegenerateOrbit,
    EpochMismatch,
    SingularRadius,
    StepSizeUnderflow,
    SingularTransferTime,
    ZeroOffset,
    InsufficientWaypoints,
    InvalidArgument,
    UsageError,
    IoError,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::DegenerateOrbit: return "DegenerateOrbit";
    case ErrorKind::EpochMismatch: return "EpochMismatch";
    case ErrorKind::SingularRadius: return "SingularRadius";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::SingularTransferTime: return "SingularTransferTime";
    case ErrorKind::ZeroOffset: return "ZeroOffset";
    case ErrorKind::InsufficientWaypoints: return "InsufficientWaypoints";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UsageError: return "UsageError";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

/**
 * @brief Library error carrying a machine-checkable kind.
 *
 * Guidance failures inside a campaign also carry the index of the
 * offending segment so callers can perturb the transfer time.
 */
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<std::size_t> segment = std::nullopt)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), segment_(segment) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> segment() const noexcept { return segment_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> segment_;
};

} // namespace rpod

#endif // RPOD_CORE_HPP
