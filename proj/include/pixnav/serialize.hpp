#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "pixnav/episode.hpp"
#include "pixnav/geometry.hpp"
#include "pixnav/instruct.hpp"

namespace pixnav {

nlohmann::json to_json(const Vec3& v);
Vec3 vec3_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PixelCoord& p);
PixelCoord pixel_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Pose& p);  // {position:[x,y,z], yaw}
Pose pose_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Instruction& ins);

/// One JSONL record per episode: header fields, metrics and every step.
nlohmann::json to_json(const EpisodeLog& log);

/// Column names and one CSV row of per-episode numbers.
std::string episode_csv_header();
std::string episode_csv_row(const EpisodeLog& log, int episode);

}  // namespace pixnav
