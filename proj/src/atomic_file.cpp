#include "pfcm/atomic_file.hpp"

#include <fstream>
#include <system_error>

#include "pfcm/error.hpp"

namespace pfcm {

namespace fs = std::filesystem;

namespace {

fs::path temp_name(const fs::path& target) {
    fs::path tmp = target;
    tmp += ".tmp";
    return tmp;
}

void fill_temp(const fs::path& tmp, const std::function<void(std::ostream&)>& fill, bool binary) {
    std::ofstream out(tmp, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    try {
        fill(out);
        out.flush();
        if (!out) throw DataError("write failed for '" + tmp.string() + "'");
    } catch (...) {
        out.close();
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

}  // namespace

void write_file_atomically(const fs::path& path, const std::function<void(std::ostream&)>& fill, bool binary) {
    const auto tmp = temp_name(path);
    fill_temp(tmp, fill, binary);
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw DataError("cannot move output into place at '" + path.string() + "'");
    }
}

AtomicFileSet::~AtomicFileSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& e : staged_) fs::remove(e.temp, ec);
}

void AtomicFileSet::stage(const fs::path& path, const std::function<void(std::ostream&)>& fill, bool binary) {
    const auto tmp = temp_name(path);
    fill_temp(tmp, fill, binary);
    staged_.push_back({tmp, path});
}

void AtomicFileSet::commit() {
    for (const auto& e : staged_) {
        std::error_code ec;
        fs::rename(e.temp, e.target, ec);
        if (ec) throw DataError("cannot move output into place at '" + e.target.string() + "'");
    }
    committed_ = true;
}

}  // namespace pfcm
