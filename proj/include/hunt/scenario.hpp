#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hunt/figure_eight.hpp"
#include "hunt/geom.hpp"
#include "hunt/mission.hpp"
#include "hunt/sensors.hpp"

namespace hunt {

/// Everything the chase variant needs: the course the target copter flies,
/// the chaser's state machine parameters, the target camera, and the
/// horizontal speed ceiling granted to the chaser.
struct ChaseSetup {
  FigureEight::Params course;
  ChaseMission::Params mission;
  TargetSensorConfig sensor;
  double v_max = 12.0;
};

/// A fully described simulation run, loadable from JSON.
struct Scenario {
  enum class Kind { hunt, chase };

  std::string name = "unnamed";
  Kind kind = Kind::hunt;
  std::uint64_t seed = 1;
  double tick = 0.02;
  double duration_cap = 300.0;
  Geofence fence;
  Vec3 start{5.0, 20.0, 0.0};
  std::vector<Vec3> balloons;
  double balloon_diameter = 0.6;
  MissionParams mission;
  CameraModel camera;
  ChaseSetup chase;
};

namespace detail {

inline Vec3 parse_vec3(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 3)
    throw std::runtime_error(std::string(what) + " must be a [x, y, z] array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline void parse_span(const nlohmann::json& j, const char* what, double& lo,
                       double& hi) {
  if (!j.is_array() || j.size() != 2)
    throw std::runtime_error(std::string(what) + " must be a [min, max] array");
  lo = j[0].get<double>();
  hi = j[1].get<double>();
}

inline Rect parse_rect(const nlohmann::json& j, const char* what) {
  Rect r;
  parse_span(j.at("x"), what, r.x_min, r.x_max);
  parse_span(j.at("y"), what, r.y_min, r.y_max);
  return r;
}

}  // namespace detail

inline Scenario parse_scenario(const nlohmann::json& j) {
  Scenario s;
  s.fence.rect = {0.0, 90.0, 0.0, 40.0};
  s.fence.z_min = 0.5;
  s.fence.z_max = 8.0;

  s.name = j.value("name", s.name);
  if (j.contains("kind")) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "hunt")
      s.kind = Scenario::Kind::hunt;
    else if (kind == "chase")
      s.kind = Scenario::Kind::chase;
    else
      throw std::runtime_error("unknown scenario kind '" + kind + "'");
  }
  s.seed = j.value("seed", s.seed);
  s.tick = j.value("tick", s.tick);
  if (!(s.tick > 0.0 && s.tick <= 0.1))
    throw std::runtime_error("tick must be in (0, 0.1] seconds");
  s.duration_cap = j.value("duration_cap", s.duration_cap);

  if (j.contains("arena")) {
    const auto& a = j.at("arena");
    if (a.contains("x")) detail::parse_span(a.at("x"), "arena.x",
                                            s.fence.rect.x_min,
                                            s.fence.rect.x_max);
    if (a.contains("y")) detail::parse_span(a.at("y"), "arena.y",
                                            s.fence.rect.y_min,
                                            s.fence.rect.y_max);
    if (a.contains("z"))
      detail::parse_span(a.at("z"), "arena.z", s.fence.z_min, s.fence.z_max);
    if (a.contains("mask"))
      s.fence.mask = detail::parse_rect(a.at("mask"), "arena.mask");
  }
  if (!s.fence.valid()) throw std::runtime_error("arena bounds are degenerate");

  if (j.contains("start")) s.start = detail::parse_vec3(j.at("start"), "start");

  if (j.contains("balloons"))
    for (const auto& b : j.at("balloons"))
      s.balloons.push_back(detail::parse_vec3(b, "balloon"));
  s.balloon_diameter = j.value("balloon_diameter", s.balloon_diameter);
  for (std::size_t i = 0; i < s.balloons.size(); ++i)
    if (!s.fence.contains(s.balloons[i]))
      throw std::runtime_error("balloon " + std::to_string(i) +
                               " lies outside the allowed arena region");

  if (j.contains("mission")) {
    const auto& m = j.at("mission");
    if (m.contains("strategy")) {
      const std::string strat = m.at("strategy").get<std::string>();
      if (strat == "direct")
        s.mission.strategy = MissionParams::Strategy::direct;
      else if (strat == "star")
        s.mission.strategy = MissionParams::Strategy::star;
      else
        throw std::runtime_error("unknown strategy '" + strat + "'");
    }
    s.mission.search_speed = m.value("search_speed", s.mission.search_speed);
    s.mission.search_altitude =
        m.value("search_altitude", s.mission.search_altitude);
    s.mission.lane_inset = m.value("lane_inset", s.mission.lane_inset);
    s.mission.lane_spacing = m.value("lane_spacing", s.mission.lane_spacing);
    s.mission.pop_radius = m.value("pop_radius", s.mission.pop_radius);
    s.mission.confirm_ticks = m.value("confirm_ticks", s.mission.confirm_ticks);
  }

  if (j.contains("camera")) {
    const auto& c = j.at("camera");
    if (c.contains("fov_h_deg"))
      s.camera.fov_h = deg2rad(c.at("fov_h_deg").get<double>());
    if (c.contains("fov_v_deg"))
      s.camera.fov_v = deg2rad(c.at("fov_v_deg").get<double>());
    s.camera.reliable_range =
        c.value("reliable_range", s.camera.reliable_range);
    s.camera.max_range = c.value("max_range", s.camera.max_range);
    s.camera.far_probability =
        c.value("far_probability", s.camera.far_probability);
    s.camera.frame_rate = c.value("frame_rate", s.camera.frame_rate);
    s.camera.range_noise_slope =
        c.value("range_noise_slope", s.camera.range_noise_slope);
    s.camera.range_noise_floor =
        c.value("range_noise_floor", s.camera.range_noise_floor);
    if (c.contains("angular_sigma_deg"))
      s.camera.angular_sigma = deg2rad(c.at("angular_sigma_deg").get<double>());
  }

  if (j.contains("chase")) {
    const auto& c = j.at("chase");
    if (c.contains("course")) {
      const auto& f = c.at("course");
      if (f.contains("center"))
        s.chase.course.center = detail::parse_vec3(f.at("center"), "center");
      s.chase.course.half_length =
          f.value("half_length", s.chase.course.half_length);
      s.chase.course.half_width =
          f.value("half_width", s.chase.course.half_width);
      s.chase.course.z_amp = f.value("z_amp", s.chase.course.z_amp);
      s.chase.course.speed = f.value("speed", s.chase.course.speed);
      s.chase.course.phase = f.value("phase", s.chase.course.phase);
    }
    if (c.contains("corner"))
      s.chase.mission.corner = detail::parse_vec3(c.at("corner"), "corner");
    s.chase.mission.lookahead =
        c.value("lookahead", s.chase.mission.lookahead);
    s.chase.mission.a_max = c.value("a_max", s.chase.mission.a_max);
    s.chase.mission.brake_margin =
        c.value("brake_margin", s.chase.mission.brake_margin);
    s.chase.v_max = c.value("v_max", s.chase.v_max);
    s.chase.sensor.camera = s.camera;
    s.chase.sensor.hang_below =
        c.value("hang_below", s.chase.sensor.hang_below);
    s.chase.sensor.ball_diameter =
        c.value("ball_diameter", s.chase.sensor.ball_diameter);
    s.chase.sensor.focal_px = c.value("focal_px", s.chase.sensor.focal_px);
    if (!s.fence.rect.contains(s.chase.course.center.x,
                               s.chase.course.center.y))
      throw std::runtime_error("chase course center is outside the arena");
  }
  return s;
}

inline Scenario parse_scenario(const std::string& text) {
  return parse_scenario(nlohmann::json::parse(text));
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  nlohmann::json j;
  in >> j;
  return parse_scenario(j);
}

}  // namespace hunt
