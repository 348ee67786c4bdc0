// Copyright 2026 The qgraph Authors
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

#include "qgraph/library.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include <unistd.h>

namespace qgraph {

namespace fs = std::filesystem;

namespace {

std::shared_ptr<std::shared_mutex> lock_for(const fs::path &dir) {
    static std::mutex registry_mutex;
    static std::map<std::string, std::weak_ptr<std::shared_mutex>> registry;
    std::lock_guard guard(registry_mutex);
    auto key = dir.string();
    if (auto existing = registry[key].lock()) return existing;
    auto lock = std::make_shared<std::shared_mutex>();
    registry[key] = lock;
    return lock;
}

std::string temp_suffix() {
    static std::atomic<unsigned long> counter{0};
    return ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter.fetch_add(1));
}

}  // namespace

GraphLibrary::GraphLibrary(fs::path dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw StorageError("cannot create library directory " + dir.string() + ": " + ec.message());
    dir_ = fs::weakly_canonical(dir, ec);
    if (ec) dir_ = std::move(dir);
    lock_ = lock_for(dir_);
}

bool GraphLibrary::valid_name(std::string_view name) {
    if (name.empty() || name.size() > 128 || name.front() == '.') return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
               c == '.';
    });
}

fs::path GraphLibrary::path_for(const std::string &name) const {
    if (!valid_name(name)) throw std::invalid_argument("invalid graph name \"" + name + "\"");
    return dir_ / (name + std::string(kExtension));
}

std::vector<std::string> GraphLibrary::list() const {
    std::shared_lock guard(*lock_);
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto &entry : fs::directory_iterator(dir_, ec)) {
        if (!entry.is_regular_file()) continue;
        auto file = entry.path().filename().string();
        if (file.size() <= kExtension.size() || !file.ends_with(kExtension)) continue;
        auto name = file.substr(0, file.size() - kExtension.size());
        if (valid_name(name)) names.push_back(std::move(name));
    }
    if (ec) throw StorageError("cannot list " + dir_.string() + ": " + ec.message());
    std::sort(names.begin(), names.end());
    return names;
}

void GraphLibrary::save(const std::string &name, const GraphDocument &doc) {
    auto target = path_for(name);
    auto text = encode_graph(doc);
    std::unique_lock guard(*lock_);
    auto tmp = dir_ / ("." + name + temp_suffix());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw StorageError("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) {
            std::error_code ignore;
            fs::remove(tmp, ignore);
            throw StorageError("short write to " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignore;
        fs::remove(tmp, ignore);
        throw StorageError("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

std::string GraphLibrary::load_text(const std::string &name) const {
    auto path = path_for(name);
    std::shared_lock guard(*lock_);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (!fs::exists(path)) throw NotFound("graph \"" + name + "\" not found");
        throw StorageError("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

GraphDocument GraphLibrary::load(const std::string &name) const { return decode_graph(load_text(name)); }

bool GraphLibrary::remove(const std::string &name) {
    auto path = path_for(name);
    std::unique_lock guard(*lock_);
    std::error_code ec;
    bool removed = fs::remove(path, ec);
    if (ec) throw StorageError("cannot remove " + path.string() + ": " + ec.message());
    return removed;
}

}  // namespace qgraph
