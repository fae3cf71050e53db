// Copyright 2026 The kbqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <string>

namespace kbqa_test {

inline std::filesystem::path data_dir() { return KBQA_TEST_DATA_DIR; }

// Scratch copy of the shipped data tree, removed on destruction.
class ScratchData {
 public:
  ScratchData() {
    static std::atomic<int> counter{0};
    auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    root_ = std::filesystem::temp_directory_path() /
            ("kbqa-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(root_);
    std::filesystem::copy(data_dir(), root_ / "data", std::filesystem::copy_options::recursive);
  }
  ~ScratchData() {
    std::error_code ec;
    std::filesystem::remove_all(root_, ec);
  }
  ScratchData(const ScratchData&) = delete;
  ScratchData& operator=(const ScratchData&) = delete;

  std::filesystem::path path(const std::string& rel) const { return root_ / "data" / rel; }
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

}  // namespace kbqa_test
