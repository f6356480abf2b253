#include "pixnav/external_policy.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <random>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>

#include "pixnav/gradmap.hpp"
#include "pixnav/raster_io.hpp"

namespace pixnav {

nlohmann::json make_policy_request(int step, int width, int height, const std::filesystem::path& depth_path,
                                   const std::filesystem::path& gradmap_path) {
  return {{"step", step},
          {"width", width},
          {"height", height},
          {"depth_raster_path", depth_path.string()},
          {"gradmap_path", gradmap_path.string()}};
}

Instruction parse_policy_reply(const std::string& line, const CameraIntrinsics& k) {
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw PolicyError(fmt::format("malformed policy reply: {}", e.what()));
  }
  if (reply.contains("error")) {
    throw PolicyError(fmt::format("policy reported an error: {}", reply["error"].dump()));
  }
  auto pixel = [&](const char* key) {
    const auto it = reply.find(key);
    if (it == reply.end() || !it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
      throw PolicyError(fmt::format("policy reply lacks a numeric [x, y] '{}'", key));
    }
    const PixelCoord p{(*it)[0].get<double>(), (*it)[1].get<double>()};
    if (!k.contains(p)) {
      throw PolicyError(fmt::format("policy reply '{}' ({}, {}) is outside the image", key, p.x, p.y));
    }
    return p;
  };
  return {pixel("goto"), pixel("lookat"), false};
}

namespace {

class ExternalPolicy final : public Policy {
 public:
  explicit ExternalPolicy(const ExternalPolicyOptions& options) : options_(options) {
    if (options_.scratch_dir.empty()) {
      std::random_device rd;
      options_.scratch_dir =
          std::filesystem::temp_directory_path() / fmt::format("pixnav-policy-{}-{:x}", ::getpid(), rd());
      owns_scratch_ = true;
    }
    std::filesystem::create_directories(options_.scratch_dir);
    spawn();
  }

  ~ExternalPolicy() override {
    if (to_child_ >= 0) {
      ::close(to_child_);
    }
    if (from_child_ >= 0) {
      ::close(from_child_);
    }
    if (pid_ > 0) {
      int status = 0;
      bool exited = false;
      for (int i = 0; i < 50 && !exited; ++i) {
        exited = ::waitpid(pid_, &status, WNOHANG) == pid_;
        if (!exited) {
          ::usleep(10000);
        }
      }
      // Children of the shell may outlive it and hold our output streams open.
      ::kill(-pid_, SIGKILL);
      if (!exited) {
        ::waitpid(pid_, &status, 0);
      }
    }
    if (owns_scratch_) {
      std::error_code ec;
      std::filesystem::remove_all(options_.scratch_dir, ec);
    }
  }

  Instruction decide(const Observation& obs) override {
    const auto depth_path = options_.scratch_dir / fmt::format("depth_{:06d}.f32", obs.step);
    const auto grad_path = options_.scratch_dir / fmt::format("grad_{:06d}.f32", obs.step);
    const FloatRaster depth = depth_to_raster(obs.depth);
    write_raster(depth_path, depth);
    write_raster(grad_path, gradmap_to_raster(sobel(raster_to_depth(depth))));

    const std::string request =
        make_policy_request(obs.step, obs.intrinsics.width(), obs.intrinsics.height(), depth_path, grad_path).dump() +
        "\n";
    write_all(request);
    return parse_policy_reply(read_line(), obs.intrinsics);
  }

  std::string name() const override { return "external"; }

 private:
  void spawn() {
    int in_pipe[2];
    int out_pipe[2];
    if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0) {
      throw PolicyError(fmt::format("pipe failed: {}", std::strerror(errno)));
    }
    pid_ = ::fork();
    if (pid_ < 0) {
      throw PolicyError(fmt::format("fork failed: {}", std::strerror(errno)));
    }
    if (pid_ == 0) {
      ::setpgid(0, 0);  // own group so the whole command tree can be killed
      ::dup2(in_pipe[0], STDIN_FILENO);
      ::dup2(out_pipe[1], STDOUT_FILENO);
      ::close(in_pipe[0]);
      ::close(in_pipe[1]);
      ::close(out_pipe[0]);
      ::close(out_pipe[1]);
      ::execl("/bin/sh", "sh", "-c", options_.command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::setpgid(pid_, pid_);
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    ::fcntl(to_child_, F_SETFD, FD_CLOEXEC);
    ::fcntl(from_child_, F_SETFD, FD_CLOEXEC);
  }

  void write_all(const std::string& data) {
    // A dead child would otherwise kill us with SIGPIPE.
    struct sigaction ignore {};
    struct sigaction previous {};
    ignore.sa_handler = SIG_IGN;
    ::sigaction(SIGPIPE, &ignore, &previous);
    std::size_t done = 0;
    while (done < data.size()) {
      const ssize_t n = ::write(to_child_, data.data() + done, data.size() - done);
      if (n < 0 && errno == EINTR) {
        continue;
      }
      if (n <= 0) {
        ::sigaction(SIGPIPE, &previous, nullptr);
        throw PolicyError("external policy closed its input");
      }
      done += static_cast<std::size_t>(n);
    }
    ::sigaction(SIGPIPE, &previous, nullptr);
  }

  std::string read_line() {
    const auto deadline = std::chrono::steady_clock::now() + options_.timeout;
    while (true) {
      const auto newline = buffer_.find('\n');
      if (newline != std::string::npos) {
        std::string line = buffer_.substr(0, newline);
        buffer_.erase(0, newline + 1);
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        throw PolicyError(fmt::format("external policy did not reply within {} ms", options_.timeout.count()));
      }
      pollfd pfd{from_child_, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
      if (ready < 0 && errno == EINTR) {
        continue;
      }
      if (ready == 0) {
        continue;  // deadline check above
      }
      char chunk[4096];
      const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR) {
        continue;
      }
      if (n <= 0) {
        throw PolicyError("external policy exited before replying");
      }
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  ExternalPolicyOptions options_;
  bool owns_scratch_ = false;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

}  // namespace

std::unique_ptr<Policy> external_policy(const ExternalPolicyOptions& options) {
  return std::make_unique<ExternalPolicy>(options);
}

}  // namespace pixnav
