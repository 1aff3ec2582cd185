// Copyright 2026 The Phicon Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Files under data/ compiled into the library (see cmake/embed_data.cmake).

#ifndef PHICON_SRC_BUILTIN_DATA_HPP_
#define PHICON_SRC_BUILTIN_DATA_HPP_

#include <optional>
#include <string_view>
#include <vector>

namespace phicon {

// Path relative to data/, with forward slashes, e.g. "stopwords.txt".
std::optional<std::string_view> builtin_file(std::string_view relative_path);

// Throws kIo when the file was not embedded.
std::string_view require_builtin_file(std::string_view relative_path);

std::vector<std::string_view> builtin_file_names();

}  // namespace phicon

#endif  // PHICON_SRC_BUILTIN_DATA_HPP_
