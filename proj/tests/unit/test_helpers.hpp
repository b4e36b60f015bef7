#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "ldfs/error.hpp"

namespace testutil {

// Scratch file that cleans up after the test.
class TempFile {
 public:
  explicit TempFile(const std::string& name) {
    path_ = (std::filesystem::temp_directory_path() /
             ("ldfs_test_" + std::to_string(counter_++) + "_" + name))
                .string();
  }
  ~TempFile() { std::remove(path_.c_str()); }

  const std::string& path() const { return path_; }

  void write(const std::string& content) const {
    std::ofstream out(path_);
    out << content;
  }

 private:
  static inline int counter_ = 0;
  std::string path_;
};

// Error code of a callable expected to throw ldfs::Error.
template <typename F>
ldfs::errc thrown_code(F&& f) {
  try {
    f();
  } catch (const ldfs::Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected ldfs::Error was not thrown");
}

}  // namespace testutil
