// Copyright 2026 The srbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SRBENCH_ERRORS_H_
#define SRBENCH_ERRORS_H_

#include <filesystem>
#include <stdexcept>
#include <string>

namespace srbench {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition was violated by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// File-level failures carry the offending path.
class IoError : public Error {
 public:
  IoError(const std::filesystem::path& path, const std::string& what)
      : Error(path.string() + ": " + what), path_(path) {}
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

class FileNotFound : public IoError {
 public:
  explicit FileNotFound(const std::filesystem::path& path)
      : IoError(path, "no such file") {}
};

class UnsupportedFormat : public IoError {
 public:
  using IoError::IoError;
};

class CorruptStream : public IoError {
 public:
  using IoError::IoError;
};

class WriteFailed : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace srbench

#endif  // SRBENCH_ERRORS_H_
