#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace rotsync {

/// Angle of a 3-D rotation in radians, always in [0, pi].
class RotationMagnitude {
public:
    explicit RotationMagnitude(double radians);

    double value() const { return value_; }

private:
    double value_;
};

/// 6-DoF rigid transform: a unit quaternion plus a translation in metres.
///
/// The quaternion is renormalized on construction and canonicalized to a
/// non-negative scalar part (q and -q describe the same rotation), so the
/// rotation angle can be read off without a double-cover ambiguity.
class RigidMotion {
public:
    RigidMotion();  // identity
    RigidMotion(const Eigen::Quaterniond& rotation, const Eigen::Vector3d& translation);

    static RigidMotion from_axis_angle(const Eigen::Vector3d& axis, double angle,
                                       const Eigen::Vector3d& translation = Eigen::Vector3d::Zero());

    const Eigen::Quaterniond& rotation() const { return rotation_; }
    const Eigen::Vector3d& translation() const { return translation_; }

    RigidMotion inverse() const;

private:
    Eigen::Quaterniond rotation_;
    Eigen::Vector3d translation_;
};

/// a followed by b, both expressed in their local frames.
RigidMotion compose(const RigidMotion& a, const RigidMotion& b);

/// Rotation angle of a motion; translation plays no part.
RotationMagnitude rotation_magnitude(const RigidMotion& m);

/// The closed transformation loop t * va * t^-1 * vb^-1. For two rigidly
/// connected sensors whose per-step motions va, vb were acquired at the same
/// instants, the loop collapses to the identity.
RigidMotion cycle_residual(const RigidMotion& t, const RigidMotion& va, const RigidMotion& vb);

/// Angle between the orientations of two motions (translation ignored).
double angular_distance(const RigidMotion& a, const RigidMotion& b);

}  // namespace rotsync
