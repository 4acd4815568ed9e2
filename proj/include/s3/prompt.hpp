/*
 * Copyright 2026 the s3sim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace s3 {

// Text template with {name} placeholders. Templates live as plain files in
// the prompts directory so wording changes never touch code. Unknown
// placeholders are left verbatim.
class PromptTemplate {
 public:
  PromptTemplate() = default;
  explicit PromptTemplate(std::string text) : text_(std::move(text)) {}

  static PromptTemplate from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read prompt template: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return PromptTemplate(buf.str());
  }

  const std::string& text() const { return text_; }

  std::string render(const std::map<std::string, std::string>& values) const {
    std::string out;
    out.reserve(text_.size());
    size_t i = 0;
    while (i < text_.size()) {
      if (text_[i] != '{') {
        out += text_[i++];
        continue;
      }
      const size_t close = text_.find('}', i + 1);
      if (close == std::string::npos) {
        out += text_.substr(i);
        break;
      }
      const std::string key = text_.substr(i + 1, close - i - 1);
      auto it = values.find(key);
      if (it != values.end()) {
        out += it->second;
      } else {
        out += text_.substr(i, close - i + 1);
      }
      i = close + 1;
    }
    return out;
  }

 private:
  std::string text_;
};

}  // namespace s3
