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

#ifndef QGRAPH_LIBRARY_HPP
#define QGRAPH_LIBRARY_HPP

#include <filesystem>
#include <memory>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qgraph/io.hpp"

namespace qgraph {

class NotFound : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class StorageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A directory of graph documents stored as `<name>.graph.json`.
///
/// Writes go to a temporary file in the same directory and are renamed into
/// place, so readers never observe a partially written document. All
/// instances opened on the same directory share one reader/writer lock.
class GraphLibrary {
   public:
    static constexpr std::string_view kExtension = ".graph.json";

    /// Creates the directory if needed; throws StorageError on failure.
    explicit GraphLibrary(std::filesystem::path dir);

    const std::filesystem::path &dir() const { return dir_; }

    /// Names are 1-128 characters from [A-Za-z0-9_.-] and may not start with '.'.
    static bool valid_name(std::string_view name);

    /// Sorted names of stored documents.
    std::vector<std::string> list() const;

    /// Stores the canonical encoding of `doc`; last write wins.
    void save(const std::string &name, const GraphDocument &doc);

    /// Stored document text; throws NotFound.
    std::string load_text(const std::string &name) const;
    GraphDocument load(const std::string &name) const;

    /// Returns false if nothing was stored under `name`.
    bool remove(const std::string &name);

   private:
    std::filesystem::path path_for(const std::string &name) const;

    std::filesystem::path dir_;
    std::shared_ptr<std::shared_mutex> lock_;
};

}  // namespace qgraph

#endif
