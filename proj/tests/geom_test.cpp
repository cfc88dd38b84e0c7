#include "hunt/geom.hpp"

#include <gtest/gtest.h>

using hunt::Vec3;

TEST(Geom, VectorArithmetic) {
  const Vec3 a{1, 2, 3}, b{4, -5, 6};
  const Vec3 s = a + b;
  EXPECT_EQ(s.x, 5.0);
  EXPECT_EQ(s.y, -3.0);
  EXPECT_EQ(s.z, 9.0);
  const Vec3 d = a - b;
  EXPECT_EQ(d.x, -3.0);
  EXPECT_DOUBLE_EQ(a.dot(b), 1 * 4 + 2 * -5 + 3 * 6);
  EXPECT_DOUBLE_EQ((a * 2.0).y, 4.0);
  EXPECT_DOUBLE_EQ((2.0 * a).y, 4.0);
  EXPECT_NEAR((Vec3{3, 4, 0}.norm()), 5.0, 1e-12);
  EXPECT_NEAR((Vec3{3, 4, 12}.norm_xy()), 5.0, 1e-12);
  const Vec3 n = Vec3{0, 0, 7}.normalized();
  EXPECT_NEAR(n.z, 1.0, 1e-12);
  EXPECT_EQ((Vec3{0, 0, 0}.normalized().norm()), 0.0);  // safe on zero vectors
}

TEST(Geom, GroundDistanceIgnoresHeight) {
  EXPECT_NEAR(hunt::ground_distance({0, 0, 10}, {3, 4, -2}), 5.0, 1e-12);
}

TEST(Geom, PointRayDistance) {
  const Vec3 origin{0, 0, 0};
  const Vec3 dir{1, 0, 0};
  // alongside the ray: perpendicular distance
  EXPECT_NEAR(hunt::point_ray_distance({5, 2, 0}, origin, dir), 2.0, 1e-12);
  // behind the origin: distance to the origin itself
  EXPECT_NEAR(hunt::point_ray_distance({-3, 4, 0}, origin, dir), 5.0, 1e-12);
  // on the ray
  EXPECT_NEAR(hunt::point_ray_distance({7, 0, 0}, origin, dir), 0.0, 1e-12);
  // unnormalized direction is handled
  EXPECT_NEAR(hunt::point_ray_distance({5, 3, 0}, origin, {10, 0, 0}), 3.0,
              1e-12);
}

TEST(Geom, WrapAngle) {
  EXPECT_NEAR(hunt::wrap_angle(-6.0), 0.283185307, 1e-9);
  EXPECT_NEAR(hunt::wrap_angle(0.0), 0.0, 1e-15);
  EXPECT_NEAR(hunt::wrap_angle(3.0 * hunt::kPi), hunt::kPi, 1e-12);
  // the boundary maps to +pi from both sides
  EXPECT_NEAR(hunt::wrap_angle(hunt::kPi), hunt::kPi, 1e-12);
  EXPECT_NEAR(hunt::wrap_angle(-hunt::kPi), hunt::kPi, 1e-12);
  EXPECT_NEAR(hunt::wrap_angle(2.0 * hunt::kPi + 0.5), 0.5, 1e-12);
  EXPECT_NEAR(hunt::wrap_angle(-2.0 * hunt::kPi - 0.5), -0.5, 1e-12);
}

TEST(Geom, DegreesRadians) {
  EXPECT_NEAR(hunt::deg2rad(180.0), hunt::kPi, 1e-15);
  EXPECT_NEAR(hunt::rad2deg(hunt::kPi / 2.0), 90.0, 1e-12);
}
