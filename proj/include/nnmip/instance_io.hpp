// Copyright 2026 The nnmip authors
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

#ifndef NNMIP_INSTANCE_IO_HPP_
#define NNMIP_INSTANCE_IO_HPP_

#include <string>

#include "nnmip/instance.hpp"

namespace nnmip {

/// Parses the `.nnmip` text format. Throws ParseError on malformed input
/// (message names the offending section/field) and Error when the parsed
/// instance fails validation. Maximization instances are negated into
/// minimization form here.
ProblemInstance load_instance(const std::string& text);

/// Serializes an instance. save(load(save(i))) is byte-identical to
/// save(i); numbers round-trip exactly through decimal strings.
std::string save_instance(const ProblemInstance& instance);

ProblemInstance load_instance_file(const std::string& path);
void save_instance_file(const ProblemInstance& instance,
                        const std::string& path);

}  // namespace nnmip

#endif  // NNMIP_INSTANCE_IO_HPP_
