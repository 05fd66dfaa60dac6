#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <vector>

namespace pfcm {

/// Writes through a sibling temp file and renames it over `path` only after
/// `fill` returns normally and the stream is flushed cleanly.
void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& fill, bool binary = false);

/// Stages several files; nothing lands at its final path unless all fills succeed.
class AtomicFileSet {
public:
    AtomicFileSet() = default;
    AtomicFileSet(const AtomicFileSet&) = delete;
    AtomicFileSet& operator=(const AtomicFileSet&) = delete;
    ~AtomicFileSet();

    void stage(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fill,
               bool binary = false);
    void commit();

private:
    struct Entry {
        std::filesystem::path temp;
        std::filesystem::path target;
    };
    std::vector<Entry> staged_;
    bool committed_ = false;
};

}  // namespace pfcm
