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

#include "autocalib/json_io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "autocalib/error.h"

namespace autocalib {
namespace {

void Indent(std::string* out, int depth) { out->append(2 * depth, ' '); }

void DumpValue(const Json& value, int depth, std::string* out) {
  switch (value.type()) {
    case Json::value_t::object: {
      if (value.empty()) {
        out->append("{}");
        return;
      }
      out->append("{\n");
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out->append(",\n");
        first = false;
        Indent(out, depth + 1);
        out->append(Json(key).dump());
        out->append(": ");
        DumpValue(item, depth + 1, out);
      }
      out->push_back('\n');
      Indent(out, depth);
      out->push_back('}');
      return;
    }
    case Json::value_t::array: {
      if (value.empty()) {
        out->append("[]");
        return;
      }
      // Arrays of scalars stay on one line; point lists would otherwise
      // explode into thousands of lines.
      bool scalars = true;
      for (const auto& item : value) {
        if (item.is_structured()) scalars = false;
      }
      if (scalars) {
        out->push_back('[');
        for (std::size_t i = 0; i < value.size(); ++i) {
          if (i > 0) out->append(", ");
          DumpValue(value[i], depth + 1, out);
        }
        out->push_back(']');
        return;
      }
      out->append("[\n");
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i > 0) out->append(",\n");
        Indent(out, depth + 1);
        DumpValue(value[i], depth + 1, out);
      }
      out->push_back('\n');
      Indent(out, depth);
      out->push_back(']');
      return;
    }
    case Json::value_t::number_float: {
      const double x = value.get<double>();
      if (!std::isfinite(x)) {
        out->append("null");
        return;
      }
      char buffer[32];
      std::snprintf(buffer, sizeof(buffer), "%.17g", x);
      std::string text(buffer);
      // Keep floats recognizable as floats when read back.
      if (text.find_first_of(".eEn") == std::string::npos) text.append(".0");
      out->append(text);
      return;
    }
    default:
      out->append(value.dump());
      return;
  }
}

}  // namespace

std::string DumpJson(const Json& value) {
  std::string out;
  DumpValue(value, 0, &out);
  out.push_back('\n');
  return out;
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Json ReadJsonFile(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

}  // namespace autocalib
