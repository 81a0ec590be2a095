#include "rotsync/geometry.hpp"

#include <cmath>

#include "rotsync/errors.hpp"

namespace rotsync {

RotationMagnitude::RotationMagnitude(double radians) : value_(radians) {
    if (!std::isfinite(radians) || radians < 0.0 || radians > M_PI) {
        throw ArgumentError("rotation magnitude must lie in [0, pi]");
    }
}

namespace {

Eigen::Quaterniond canonicalized(Eigen::Quaterniond q) {
    const double norm = q.norm();
    if (!std::isfinite(norm) || norm < 1e-12) {
        throw ArgumentError("quaternion is not normalizable");
    }
    q.coeffs() /= norm;
    if (q.w() < 0.0) {
        q.coeffs() = -q.coeffs();
    }
    return q;
}

}  // namespace

RigidMotion::RigidMotion() : rotation_(Eigen::Quaterniond::Identity()), translation_(Eigen::Vector3d::Zero()) {}

RigidMotion::RigidMotion(const Eigen::Quaterniond& rotation, const Eigen::Vector3d& translation)
    : rotation_(canonicalized(rotation)), translation_(translation) {
    if (!translation_.allFinite()) {
        throw ArgumentError("translation must be finite");
    }
}

RigidMotion RigidMotion::from_axis_angle(const Eigen::Vector3d& axis, double angle,
                                         const Eigen::Vector3d& translation) {
    const double n = axis.norm();
    if (n < 1e-12) {
        throw ArgumentError("rotation axis must be non-zero");
    }
    return RigidMotion(Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis / n)), translation);
}

RigidMotion RigidMotion::inverse() const {
    const Eigen::Quaterniond qi = rotation_.conjugate();
    return RigidMotion(qi, -(qi * translation_));
}

RigidMotion compose(const RigidMotion& a, const RigidMotion& b) {
    return RigidMotion(a.rotation() * b.rotation(), a.translation() + a.rotation() * b.translation());
}

RotationMagnitude rotation_magnitude(const RigidMotion& m) {
    // 2*atan2(|vec|, |w|) is stable near the identity, unlike 2*acos(|w|).
    const Eigen::Quaterniond& q = m.rotation();
    const double vec_norm = q.vec().norm();
    return RotationMagnitude(2.0 * std::atan2(vec_norm, std::abs(q.w())));
}

RigidMotion cycle_residual(const RigidMotion& t, const RigidMotion& va, const RigidMotion& vb) {
    return compose(compose(compose(t, va), t.inverse()), vb.inverse());
}

double angular_distance(const RigidMotion& a, const RigidMotion& b) {
    return rotation_magnitude(RigidMotion(a.rotation() * b.rotation().conjugate(), Eigen::Vector3d::Zero()))
        .value();
}

}  // namespace rotsync
