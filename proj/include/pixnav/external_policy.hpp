#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "pixnav/flight.hpp"

namespace pixnav {

// Line protocol spoken with an external policy process. Per step the flight
// loop writes one request line to the child's stdin:
//   {"step": n, "width": W, "height": H, "depth_raster_path": "...", "gradmap_path": "..."}
// and reads one reply line from its stdout:
//   {"goto": [x, y], "lookat": [x, y]}
// A reply carrying "error", malformed JSON, out-of-image pixels or a timeout
// raises PolicyError.

nlohmann::json make_policy_request(int step, int width, int height, const std::filesystem::path& depth_path,
                                   const std::filesystem::path& gradmap_path);

/// Parses and checks one reply line against the image size.
Instruction parse_policy_reply(const std::string& line, const CameraIntrinsics& k);

struct ExternalPolicyOptions {
  std::string command;  // run through /bin/sh -c
  std::chrono::milliseconds timeout{10000};
  std::filesystem::path scratch_dir;  // rasters for each request; a temp dir when empty
};

std::unique_ptr<Policy> external_policy(const ExternalPolicyOptions& options);

}  // namespace pixnav
