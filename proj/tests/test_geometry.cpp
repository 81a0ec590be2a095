#include <doctest.h>

#include <random>

#include "rotsync/errors.hpp"
#include "rotsync/geometry.hpp"
#include "test_helpers.hpp"

using namespace rotsync;
using rotsync::testing::random_motion;

TEST_CASE("compose: identity and fixed-axis angle addition") {
    const RigidMotion identity;
    const RigidMotion ii = compose(identity, identity);
    CHECK(angular_distance(ii, identity) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ii.translation().norm() == doctest::Approx(0.0));

    const RigidMotion rz90 = RigidMotion::from_axis_angle(Eigen::Vector3d::UnitZ(), M_PI / 2);
    const RigidMotion rz180 = RigidMotion::from_axis_angle(Eigen::Vector3d::UnitZ(), M_PI);
    CHECK(angular_distance(compose(rz90, rz90), rz180) < 1e-12);
}

TEST_CASE("compose: chain of 100 random motions cancels against the inverse chain") {
    std::mt19937_64 rng(42);
    std::vector<RigidMotion> motions;
    for (int i = 0; i < 100; ++i) {
        motions.push_back(random_motion(rng));
    }
    RigidMotion chain;
    for (const RigidMotion& m : motions) {
        chain = compose(chain, m);
    }
    // The inverse chain is built independently, back to front.
    RigidMotion inverse_chain;
    for (auto it = motions.rbegin(); it != motions.rend(); ++it) {
        inverse_chain = compose(inverse_chain, it->inverse());
    }
    const RigidMotion product = compose(chain, inverse_chain);
    CHECK(rotation_magnitude(product).value() < 1e-7);
    CHECK(product.translation().norm() < 1e-7);
}

TEST_CASE("compose/inverse group properties") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const RigidMotion a = random_motion(rng);
        const RigidMotion b = random_motion(rng);
        const RigidMotion c = random_motion(rng);

        const RigidMotion left = compose(compose(a, b), c);
        const RigidMotion right = compose(a, compose(b, c));
        CHECK(angular_distance(left, right) < 1e-9);
        CHECK((left.translation() - right.translation()).norm() < 1e-9);

        const RigidMotion unit = compose(a, a.inverse());
        CHECK(rotation_magnitude(unit).value() < 1e-9);
        CHECK(unit.translation().norm() < 1e-9);

        CHECK(a.rotation().norm() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(a.rotation().w() >= 0.0);
    }
}

TEST_CASE("rotation_magnitude: identity, known angle, axis-angle inversion") {
    CHECK(rotation_magnitude(RigidMotion()).value() == 0.0);

    const RigidMotion quarter = RigidMotion::from_axis_angle(Eigen::Vector3d::UnitZ(), M_PI / 2,
                                                             Eigen::Vector3d(3.0, -1.0, 2.0));
    CHECK(rotation_magnitude(quarter).value() == doctest::Approx(M_PI / 2).epsilon(1e-12));

    std::mt19937_64 rng(3);
    const RigidMotion m = RigidMotion::from_axis_angle(rotsync::testing::random_axis(rng), 0.3);
    CHECK(rotation_magnitude(m).value() == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("rotation_magnitude: invariant to translation and to conjugation") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 100; ++i) {
        const RigidMotion t = random_motion(rng);
        const RigidMotion va = random_motion(rng);

        const RigidMotion no_translation(va.rotation(), Eigen::Vector3d::Zero());
        CHECK(std::abs(rotation_magnitude(va).value() - rotation_magnitude(no_translation).value()) <
              1e-12);

        const RigidMotion conjugated = compose(compose(t, va), t.inverse());
        CHECK(std::abs(rotation_magnitude(va).value() - rotation_magnitude(conjugated).value()) <
              1e-9);
    }
}

TEST_CASE("cycle_residual: collapses for consistent motions, not otherwise") {
    std::mt19937_64 rng(9);

    const RigidMotion va = random_motion(rng);
    CHECK(rotation_magnitude(cycle_residual(RigidMotion(), va, va)).value() < 1e-12);

    for (int i = 0; i < 20; ++i) {
        const RigidMotion t = random_motion(rng);
        const RigidMotion a = random_motion(rng);
        // vb = t * va * t^-1 closes the loop t * va * t^-1 * vb^-1.
        const RigidMotion b_consistent = compose(compose(t, a), t.inverse());
        CHECK(rotation_magnitude(cycle_residual(t, a, b_consistent)).value() < 1e-9);
        CHECK(std::abs(rotation_magnitude(a).value() - rotation_magnitude(b_consistent).value()) <
              1e-9);

        const RigidMotion b_independent = random_motion(rng);
        CHECK(std::abs(rotation_magnitude(a).value() -
                       rotation_magnitude(b_independent).value()) > 1e-6);
        CHECK(rotation_magnitude(cycle_residual(t, a, b_independent)).value() > 1e-6);
    }
}

TEST_CASE("RigidMotion rejects degenerate inputs") {
    CHECK_THROWS_AS(RigidMotion(Eigen::Quaterniond(0, 0, 0, 0), Eigen::Vector3d::Zero()),
                    ArgumentError);
    CHECK_THROWS_AS(RigidMotion::from_axis_angle(Eigen::Vector3d::Zero(), 0.1), ArgumentError);
    CHECK_THROWS_AS(RotationMagnitude(-0.1), ArgumentError);
    CHECK_THROWS_AS(RotationMagnitude(3.5), ArgumentError);
}
