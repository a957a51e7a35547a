#ifndef OBSFRAME_EPISODE_HPP
#define OBSFRAME_EPISODE_HPP

// Trajectory episodes and their line-delimited JSON file format.
//
//   line 1: {"type":"header","schema":"obsframe.episode/1","episode_id":..,
//            "task":..,"instruction":..,"cameras":[{"camera_id":..,
//            "intrinsics":{"fx","fy","cx","cy","width","height"},
//            "extrinsics":{"quat_wxyz":[4],"translation_m":[3]}}]}
//   line k: {"type":"step","index":k-2,"pose_base":{"quat_wxyz":[4],
//            "translation_m":[3]},"gripper":g}
//
// Extrinsics are world-to-camera and constant for the whole episode.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "obsframe/action_codec.hpp"
#include "obsframe/camera.hpp"
#include "obsframe/error.hpp"
#include "obsframe/se3.hpp"

namespace obsframe {

inline constexpr const char* kEpisodeSchema = "obsframe.episode/1";

struct Step {
  std::int64_t index = 0;
  Pose pose_base;
  double gripper = 0.0;
};

struct TrajectoryEpisode {
  std::string episode_id;
  std::string task;
  std::string instruction;
  std::vector<CameraRig> cameras;
  std::vector<Step> steps;
};

struct Violation {
  std::string code;
  std::string detail;
};

/// Parse failure with the offending line (1-based) and field path.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& field,
             const std::string& message)
      : Error("parse_error", source + ":" + std::to_string(line) + ": field '" + field +
                                 "': " + message),
        line_(line),
        field_(field) {}

  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

inline std::vector<Violation> validate_episode(const TrajectoryEpisode& e) {
  std::vector<Violation> out;
  if (e.episode_id.empty()) out.push_back({"empty_episode_id", "episode_id is empty"});
  if (e.steps.size() < 2) {
    out.push_back({"too_few_steps", "episode has " + std::to_string(e.steps.size()) +
                                        " steps; at least 2 are required"});
  }
  if (e.cameras.empty()) out.push_back({"no_cameras", "episode has no camera rigs"});
  std::set<std::string> ids;
  for (const CameraRig& rig : e.cameras) {
    if (!ids.insert(rig.camera_id).second) {
      out.push_back({"duplicate_camera_id", "camera id '" + rig.camera_id + "' repeated"});
    }
    for (const std::string& v : validate_rig(rig)) {
      out.push_back({v, "camera '" + rig.camera_id + "'"});
    }
  }
  for (std::size_t i = 0; i < e.steps.size(); ++i) {
    const Step& s = e.steps[i];
    if (s.index != static_cast<std::int64_t>(i)) {
      out.push_back({"non_monotone_step_index", "step at position " + std::to_string(i) +
                                                    " has index " + std::to_string(s.index) +
                                                    ", expected " + std::to_string(i)});
    }
    if (!s.pose_base.finite() || !is_rotation(s.pose_base.rotation)) {
      out.push_back({"invalid_pose", "step " + std::to_string(s.index)});
    }
    if (!std::isfinite(s.gripper) || s.gripper < 0.0 || s.gripper > 1.0) {
      out.push_back({"gripper_out_of_range", "step " + std::to_string(s.index)});
    }
  }
  return out;
}

namespace detail {

struct LineContext {
  const std::string& source;
  std::size_t line;

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    throw ParseError(source, line, field, msg);
  }

  const nlohmann::json& at(const nlohmann::json& j, const std::string& key,
                           const std::string& path) const {
    if (!j.is_object() || !j.contains(key)) fail(path, "missing");
    return j.at(key);
  }

  double number(const nlohmann::json& j, const std::string& key, const std::string& path) const {
    const auto& v = at(j, key, path);
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  std::int64_t integer(const nlohmann::json& j, const std::string& key,
                       const std::string& path) const {
    const auto& v = at(j, key, path);
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<std::int64_t>();
  }

  std::string string(const nlohmann::json& j, const std::string& key,
                     const std::string& path) const {
    const auto& v = at(j, key, path);
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  template <std::size_t N>
  std::array<double, N> array(const nlohmann::json& j, const std::string& key,
                              const std::string& path) const {
    const auto& v = at(j, key, path);
    if (!v.is_array() || v.size() != N) fail(path, "expected an array of " + std::to_string(N));
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      if (!v[i].is_number()) fail(path, "expected numbers");
      out[i] = v[i].get<double>();
    }
    return out;
  }

  template <class Role>
  Rigid<Role> rigid(const nlohmann::json& j, const std::string& key,
                    const std::string& path) const {
    const auto& obj = at(j, key, path);
    const auto q = array<4>(obj, "quat_wxyz", path + ".quat_wxyz");
    const auto t = array<3>(obj, "translation_m", path + ".translation_m");
    try {
      return rigid_from_quat<Role>(UnitQuaternion::from_wxyz(q), Vec3(t[0], t[1], t[2]));
    } catch (const Error& e) {
      fail(path + ".quat_wxyz", e.what());
    }
  }
};

template <class Role>
nlohmann::json rigid_to_json(const Rigid<Role>& r) {
  const auto q = quat_from_rot(r.rotation).wxyz();
  return {{"quat_wxyz", {q[0], q[1], q[2], q[3]}},
          {"translation_m", {r.translation.x(), r.translation.y(), r.translation.z()}}};
}

}  // namespace detail

/// Parses the JSONL format. Structural problems (malformed JSON, missing or
/// mistyped fields, non-unit quaternions, per-step extrinsics) throw
/// ParseError; semantic invariants are left to validate_episode().
inline TrajectoryEpisode parse_episode(std::istream& in, const std::string& source = "<stream>") {
  TrajectoryEpisode e;
  std::string text;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    const detail::LineContext ctx{source, line_no};
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
      ctx.fail("<line>", std::string("malformed JSON: ") + err.what());
    }
    const std::string type = ctx.string(j, "type", "type");
    if (!have_header) {
      if (type != "header") ctx.fail("type", "first record must be the header");
      have_header = true;
      e.episode_id = ctx.string(j, "episode_id", "episode_id");
      e.task = ctx.string(j, "task", "task");
      e.instruction = ctx.string(j, "instruction", "instruction");
      const auto& cams = ctx.at(j, "cameras", "cameras");
      if (!cams.is_array()) ctx.fail("cameras", "expected an array");
      for (std::size_t c = 0; c < cams.size(); ++c) {
        const std::string path = "cameras[" + std::to_string(c) + "]";
        CameraRig rig;
        rig.camera_id = ctx.string(cams[c], "camera_id", path + ".camera_id");
        const auto& k = ctx.at(cams[c], "intrinsics", path + ".intrinsics");
        rig.intrinsics.fx = ctx.number(k, "fx", path + ".intrinsics.fx");
        rig.intrinsics.fy = ctx.number(k, "fy", path + ".intrinsics.fy");
        rig.intrinsics.cx = ctx.number(k, "cx", path + ".intrinsics.cx");
        rig.intrinsics.cy = ctx.number(k, "cy", path + ".intrinsics.cy");
        rig.intrinsics.width =
            static_cast<int>(ctx.integer(k, "width", path + ".intrinsics.width"));
        rig.intrinsics.height =
            static_cast<int>(ctx.integer(k, "height", path + ".intrinsics.height"));
        rig.extrinsics = ctx.rigid<ExtrinsicRole>(cams[c], "extrinsics", path + ".extrinsics");
        e.cameras.push_back(std::move(rig));
      }
      continue;
    }
    if (type == "header") ctx.fail("type", "duplicate header record");
    if (type != "step") ctx.fail("type", "unknown record type '" + type + "'");
    if (j.contains("extrinsics") || j.contains("cameras")) {
      ctx.fail("extrinsics", "per-step extrinsics are not supported; cameras are fixed per episode");
    }
    Step s;
    s.index = ctx.integer(j, "index", "index");
    s.pose_base = ctx.rigid<PoseRole>(j, "pose_base", "pose_base");
    s.gripper = ctx.number(j, "gripper", "gripper");
    e.steps.push_back(s);
  }
  if (!have_header) throw ParseError(source, line_no == 0 ? 1 : line_no, "type", "missing header");
  return e;
}

inline TrajectoryEpisode parse_episode_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open episode file " + path.string());
  return parse_episode(in, path.string());
}

inline std::string format_violations(const std::vector<Violation>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << "; ";
    os << v[i].code << " (" << v[i].detail << ")";
  }
  return os.str();
}

/// Parse + validate; throws on any violation (code of the first violation).
inline TrajectoryEpisode load_episode(const std::filesystem::path& path) {
  TrajectoryEpisode e = parse_episode_file(path);
  const auto violations = validate_episode(e);
  if (!violations.empty()) {
    throw Error(violations.front().code, path.string() + ": " + format_violations(violations));
  }
  return e;
}

inline void write_episode(std::ostream& out, const TrajectoryEpisode& e) {
  nlohmann::json cams = nlohmann::json::array();
  for (const CameraRig& rig : e.cameras) {
    const Intrinsics& k = rig.intrinsics;
    cams.push_back({{"camera_id", rig.camera_id},
                    {"intrinsics",
                     {{"fx", k.fx},
                      {"fy", k.fy},
                      {"cx", k.cx},
                      {"cy", k.cy},
                      {"width", k.width},
                      {"height", k.height}}},
                    {"extrinsics", detail::rigid_to_json(rig.extrinsics)}});
  }
  const nlohmann::json header = {{"type", "header"},          {"schema", kEpisodeSchema},
                                 {"episode_id", e.episode_id}, {"task", e.task},
                                 {"instruction", e.instruction}, {"cameras", cams}};
  out << header.dump() << '\n';
  for (const Step& s : e.steps) {
    const nlohmann::json j = {{"type", "step"},
                              {"index", s.index},
                              {"pose_base", detail::rigid_to_json(s.pose_base)},
                              {"gripper", s.gripper}};
    out << j.dump() << '\n';
  }
}

inline void write_episode_file(const std::filesystem::path& path, const TrajectoryEpisode& e) {
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write episode file " + path.string());
  write_episode(out, e);
}

/// Episode files (*.jsonl) of a directory in lexicographic order, or the
/// path itself when it names a file.
inline std::vector<std::filesystem::path> list_episode_files(const std::filesystem::path& p) {
  namespace fs = std::filesystem;
  if (!fs::exists(p)) throw Error("io_error", "path does not exist: " + p.string());
  if (!fs::is_directory(p)) return {p};
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(p)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace obsframe

#endif  // OBSFRAME_EPISODE_HPP
