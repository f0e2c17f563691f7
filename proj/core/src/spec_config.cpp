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

#include "loopsampler/spec_config.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace loopsampler {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_doubles(const std::string& s) {
    std::istringstream is(s);
    std::vector<double> out;
    double v;
    while (is >> v) out.push_back(v);
    return out;
}

std::vector<int> parse_ints(const std::string& s) {
    std::istringstream is(s);
    std::vector<int> out;
    int v;
    while (is >> v) out.push_back(v);
    return out;
}

ComplexMatrix apply_permutations(const ComplexMatrix& u, const std::vector<int>& out_perm,
                                 const std::vector<int>& in_perm) {
    ComplexMatrix m = u;
    if (!out_perm.empty()) {
        if (static_cast<int>(out_perm.size()) != u.rows())
            throw ConfigError("spec: permute_outputs length must equal modes");
        ComplexMatrix p(u.rows(), u.cols());
        for (int i = 0; i < u.rows(); ++i) p.row(i) = m.row(out_perm[i]);
        m = p;
    }
    if (!in_perm.empty()) {
        if (static_cast<int>(in_perm.size()) != u.cols())
            throw ConfigError("spec: permute_inputs length must equal modes");
        ComplexMatrix p(u.rows(), u.cols());
        for (int j = 0; j < u.cols(); ++j) p.col(j) = m.col(in_perm[j]);
        m = p;
    }
    return m;
}

} // namespace

InterferometerSpec parse_spec(std::istream& is, const std::string& base_dir,
                              const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::map<std::string, std::string> kv;
    std::string section;
    std::string line;
    while (std::getline(is, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("spec file: expected key = value: " + line);
        std::string key = trim(line.substr(0, eq));
        if (!section.empty()) key = section + "." + key;
        kv[key] = trim(line.substr(eq + 1));
    }
    for (const auto& [k, v] : overrides) kv[k] = v;

    auto get = [&](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto require = [&](const std::string& key) -> const std::string& {
        const std::string* v = get(key);
        if (!v) throw ConfigError("spec file: missing required key '" + key + "'");
        return *v;
    };

    InterferometerSpec spec;
    spec.modes = std::stoi(require("modes"));
    spec.loops = std::stoi(require("loops"));
    spec.iterations = std::stoi(require("iterations"));

    if (const std::string* uf = get("unitary_file")) {
        std::filesystem::path p(*uf);
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        spec.unitary = read_matrix_file(p.string());
    } else if (const std::string* u = get("unitary"); u && *u == "random") {
        std::uint64_t seed = 0;
        if (const std::string* s = get("unitary_seed")) seed = std::stoull(*s);
        spec.unitary = random_unitary(spec.modes, seed);
    } else {
        throw ConfigError("spec file: need unitary_file=PATH or unitary=random");
    }
    if (const std::string* po = get("permute_outputs"); po || get("permute_inputs")) {
        std::vector<int> out_perm = po ? parse_ints(*po) : std::vector<int>{};
        const std::string* pi = get("permute_inputs");
        std::vector<int> in_perm = pi ? parse_ints(*pi) : std::vector<int>{};
        spec.unitary = apply_permutations(spec.unitary, out_perm, in_perm);
    }

    const std::string& phases = require("feedback_phases");
    if (phases == "random") {
        spec.random_phases = true;
    } else {
        spec.feedback_phases = parse_doubles(phases);
    }

    const std::string& inj = require("injection");
    std::istringstream entries(inj);
    std::string entry;
    while (std::getline(entries, entry, ';')) {
        entry = trim(entry);
        if (entry.empty()) continue;
        spec.injection.push_back(parse_ints(entry));
    }
    // A single entry repeats across all iterations.
    if (spec.injection.size() == 1 && spec.iterations > 1)
        spec.injection.assign(spec.iterations, spec.injection.front());

    if (const std::string* v = get("loss.input_efficiency"))
        spec.loss.input_efficiency = parse_doubles(*v);
    if (const std::string* v = get("loss.output_efficiency"))
        spec.loss.output_efficiency = parse_doubles(*v);
    if (const std::string* v = get("loss.detector_efficiency"))
        spec.loss.detector_efficiency = std::stod(*v);
    if (const std::string* v = get("source.indistinguishability"))
        spec.source.indistinguishability = std::stod(*v);
    if (const std::string* v = get("source.g2")) spec.source.g2 = std::stod(*v);

    spec.validate();
    return spec;
}

InterferometerSpec load_spec_file(const std::string& path,
                                  const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open spec file: " + path);
    return parse_spec(is, std::filesystem::path(path).parent_path().string(), overrides);
}

std::uint64_t file_hash(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open file for hashing: " + path);
    std::uint64_t h = 14695981039346656037ull;
    char c;
    while (is.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace loopsampler
