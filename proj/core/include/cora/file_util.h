// Copyright 2026 The CoRA Authors.
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

#ifndef CORA_FILE_UTIL_H_
#define CORA_FILE_UTIL_H_

#include <string>

namespace cora {

// Writes `contents` to a sibling temp file and renames it over `path`, so
// readers never observe a partial file. Throws InputError on I/O failure.
void WriteFileAtomic(const std::string& path, const std::string& contents);

// Whole file as a string. Throws InputError when unreadable.
std::string ReadFile(const std::string& path);

}  // namespace cora

#endif  // CORA_FILE_UTIL_H_
