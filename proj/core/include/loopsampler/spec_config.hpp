/**
 * Copyright 2026 Loopsampler Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LOOPSAMPLER_SPEC_CONFIG_HPP
#define LOOPSAMPLER_SPEC_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "loopsampler/network.hpp"

namespace loopsampler {

/// Key-value spec file. Top-level keys: modes, loops, iterations,
/// unitary_file (matrix text) or unitary=random with unitary_seed,
/// feedback_phases (radians or "random"), injection (occupation vectors
/// separated by ';'), optional permute_inputs / permute_outputs.
/// Sections [loss] (input_efficiency, output_efficiency,
/// detector_efficiency) and [source] (indistinguishability, g2).
/// Overrides are (key, value) pairs with section keys prefixed, e.g.
/// "loss.detector_efficiency".
InterferometerSpec parse_spec(std::istream& is, const std::string& base_dir,
                              const std::vector<std::pair<std::string, std::string>>& overrides = {});

InterferometerSpec load_spec_file(const std::string& path,
                                  const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// FNV-1a hash of a file's bytes, for artifact provenance headers.
std::uint64_t file_hash(const std::string& path);

} // namespace loopsampler

#endif
