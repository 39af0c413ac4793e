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
// PNG reading and writing through libpng's simplified API.

#ifndef AUTOCALIB_TOOLS_PNG_IO_H_
#define AUTOCALIB_TOOLS_PNG_IO_H_

#include <filesystem>

#include "autocalib/topview.h"

namespace autocalib {

// Gray inputs load with one channel, everything else as RGB. Throws
// kIoError.
Image ReadPng(const std::filesystem::path& path);
// One channel writes gray, three RGB. Throws kIoError.
void WritePng(const std::filesystem::path& path, const Image& image);

}  // namespace autocalib

#endif  // AUTOCALIB_TOOLS_PNG_IO_H_
