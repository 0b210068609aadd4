// Copyright 2026 The msenti Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MSENTI_UTF8_HPP
#define MSENTI_UTF8_HPP

#include <string>
#include <string_view>
#include <vector>

namespace msenti::utf8 {

/// Decodes UTF-8 into code points. Malformed sequences become U+FFFD, one
/// per offending byte, so decoding never fails.
std::vector<char32_t> decode(std::string_view text);

std::string encode(char32_t cp);
std::string encode(const std::vector<char32_t>& cps);

/// Lowercases A-Z only. Non-ASCII code points pass through unchanged so the
/// result does not depend on the process locale.
constexpr char32_t to_lower(char32_t cp) {
    return (cp >= U'A' && cp <= U'Z') ? cp + (U'a' - U'A') : cp;
}

std::string to_lower_ascii(std::string_view text);

} // namespace msenti::utf8

#endif // MSENTI_UTF8_HPP
