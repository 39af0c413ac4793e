// Copyright 2026 The autocalib Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reading and writing the JSON file formats with a fixed number format.

#ifndef AUTOCALIB_JSON_IO_H_
#define AUTOCALIB_JSON_IO_H_

#include <filesystem>
#include <string>

#include "json.hpp"

namespace autocalib {

using Json = nlohmann::json;

// Serializes with two-space indentation and every floating-point number
// printed with 17 significant digits, so identical values always produce
// identical bytes.
std::string DumpJson(const Json& value);

// Throws kIoError if the file cannot be read, kParseError if it is not JSON.
Json ReadJsonFile(const std::filesystem::path& path);

// Throws kIoError on failure.
void WriteTextFile(const std::filesystem::path& path, const std::string& text);
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace autocalib

#endif  // AUTOCALIB_JSON_IO_H_
