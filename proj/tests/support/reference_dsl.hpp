// Copyright 2026 The genesyn Authors.
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

// A second, deliberately naive implementation of the 41 list functions,
// dispatched on the operation's printed name and using 128-bit arithmetic
// clamped to the 64-bit range. Used only to cross-check the library.

#include <string>
#include <vector>

#include "genesyn/dsl.hpp"

namespace reference {

using genesyn::dsl::Int;
using genesyn::dsl::List;
using genesyn::dsl::Value;

// `args` in declaration order: the integer first for int,[] signatures.
Value apply(const std::string& name, const std::vector<Value>& args);

// Straight-line interpreter: each argument searches the earlier results from
// newest to oldest for an unused value of its type, then tries the program
// input, then uses 0 or [].
Value run(const std::vector<std::string>& names, const List& input);

}  // namespace reference
