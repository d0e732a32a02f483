#pragma once

#include <filesystem>
#include <optional>
#include <random>
#include <string>

#include "polymt/error.hpp"

namespace testing {

/// Error code thrown by `f`, or nullopt when it returns normally.
template <class F>
std::optional<polymt::Errc> error_code(F&& f) {
  try {
    f();
  } catch (const polymt::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("polymt-" + tag + "-" + std::to_string(rd()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

}  // namespace testing
