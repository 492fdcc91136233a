#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wearnet/geometry.hpp"
#include "wearnet/random.hpp"

using namespace wearnet;
using Eigen::Vector3d;

namespace {

const Enclosure<double> kRoom{};  // 20 x 4 x 2.5

Vector3d random_inside(Rng& rng, const Enclosure<double>& enc) {
  return {rng.uniform(-0.5, 0.5) * enc.length * 0.999, rng.uniform(-0.5, 0.5) * enc.width * 0.999,
          rng.uniform(-0.5, 0.5) * enc.height * 0.999};
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("image locations at the room centre") {
  const auto img = image_locations<double>(Vector3d::Zero(), kRoom);
  CHECK(img[0].isApprox(Vector3d(20, 0, 0)));
  CHECK(img[1].isApprox(Vector3d(-20, 0, 0)));
  CHECK(img[4].isApprox(Vector3d(0, 0, 2.5)));
  CHECK(img[5].isApprox(Vector3d(0, 0, -2.5)));
}

TEST_CASE("wall 3 image of the corner point matches a plane mirror") {
  const Vector3d tx(8.5, 1.5, 0.25);
  const Vector3d img = image_location(tx, Surface::kWallPosY, kRoom);
  CHECK(img.isApprox(Vector3d(8.5, 2.5, 0.25)));
  CHECK(img.isApprox(oracle::mirror(tx, 1, kRoom.width / 2)));
}

TEST_CASE("transmitters outside the room are rejected") {
  CHECK_THROWS_AS(image_locations<double>(Vector3d(10.5, 0, 0), kRoom), std::invalid_argument);
  CHECK_THROWS_AS(image_locations<double>(Vector3d(0, 2, 0), kRoom), std::invalid_argument);  // on the wall
}

TEST_CASE("coincident transmitter and receiver are rejected") {
  CHECK_THROWS_AS(image_set<double>(Vector3d::Zero(), Vector3d::Zero(), kRoom), std::invalid_argument);
}

TEST_CASE("vertical geometry gives normal ceiling incidence") {
  const auto set = image_set<double>(Vector3d::Zero(), Vector3d(0, 0, -0.5), kRoom);
  CHECK(set.point(Surface::kCeiling).isApprox(Vector3d(0, 0, 2.5)));
  CHECK(set.length(Surface::kCeiling) == doctest::Approx(3.0));
  CHECK(set.angle(Surface::kCeiling) == doctest::Approx(0.0));
}

TEST_CASE("side-wall incidence for a link along x") {
  const auto set = image_set<double>(Vector3d(1, 0, 0), Vector3d(-1, 0, 0), kRoom);
  // Image at (1, 4, 0): offset (2, 4, 0) from the receiver.
  CHECK(set.angle(Surface::kWallPosY) == doctest::Approx(std::acos(4 / std::sqrt(20.0))).epsilon(1e-12));
  CHECK(set.length(Surface::kWallPosY) == doctest::Approx(std::sqrt(20.0)));
  CHECK(set.angle(Surface::kWallPosY) ==
        doctest::Approx(oracle::bounce_incidence(Vector3d(1, 0, 0), Vector3d(-1, 0, 0), 1, 2.0)).epsilon(1e-12));
  // A 2 m wide room puts the image at (1, 2, 0), giving pi/4.
  const Enclosure<double> narrow{20, 2, 2.5};
  CHECK(image_set<double>(Vector3d(1, 0, 0), Vector3d(-1, 0, 0), narrow).angle(Surface::kWallPosY) ==
        doctest::Approx(oracle::kPi / 4).epsilon(1e-12));
}

TEST_CASE("receiver ceiling image") {
  CHECK(receiver_ceiling_image<double>(Vector3d::Zero(), kRoom).isApprox(Vector3d(0, 0, 2.5)));
  const Vector3d rx(8.5, 1.5, 0.25);
  const Vector3d img = receiver_ceiling_image(rx, kRoom);
  CHECK(img.isApprox(Vector3d(8.5, 1.5, 2.25)));
  CHECK(image_location(img, Surface::kCeiling, kRoom).isApprox(rx));
}

TEST_CASE("planar projection") {
  const auto p = project_to_plane<double>(Vector3d(3, 4, 1), Vector3d::Zero());
  CHECK(p.point.isApprox(Eigen::Vector2d(3, 4)));
  CHECK(p.distance == doctest::Approx(5.0));
  const auto again = project_to_plane<double>(Vector3d(p.point.x(), p.point.y(), 0), Vector3d::Zero());
  CHECK(again.point == p.point);
}

TEST_CASE("random links: involution, path ordering and incidence oracle") {
  Rng rng(2024);
  double worst_mirror = 0;
  double worst_angle = 0;
  for (int n = 0; n < 10000; ++n) {
    const Vector3d tx = random_inside(rng, kRoom);
    const Vector3d rx = random_inside(rng, kRoom);
    const auto set = image_set(tx, rx, kRoom);
    const double direct = (tx - rx).norm();
    const auto planar = project_to_plane(tx, rx);
    REQUIRE(planar.distance <= direct + 1e-12);
    for (Surface s : kSurfaces) {
      worst_mirror = std::max(worst_mirror, (image_location(set.point(s), s, kRoom) - tx).norm());
      REQUIRE(set.length(s) >= direct - 1e-12);
      REQUIRE(set.angle(s) >= 0);
      REQUIRE(set.angle(s) <= oracle::kPi / 2);
      const int axis = normal_axis(s);
      const double plane = kRoom.mirror_offset(s) / 2;
      worst_angle = std::max(worst_angle, std::abs(set.angle(s) - oracle::bounce_incidence(tx, rx, axis, plane)));
    }
  }
  CHECK(worst_mirror < 1e-12);
  CHECK(worst_angle < 1e-9);
}

}  // TEST_SUITE
