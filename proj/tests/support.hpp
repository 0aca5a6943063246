#ifndef LOLREC_TESTS_SUPPORT_HPP
#define LOLREC_TESTS_SUPPORT_HPP

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "lolrec/ratings.hpp"

namespace lolrec::test {

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        static std::atomic<unsigned> counter{0};
        const auto unique = std::to_string(::getpid()) + "-" + std::to_string(counter.fetch_add(1));
        path_ = base / ("lolrec-test-" + unique);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::vector<MasteryRecord> table1_records() {
    return {
        {"sample-player", 267, 367191},  // Nami
        {"sample-player", 143, 136709},  // Zyra
        {"sample-player", 69, 106064},   // Cassiopeia
        {"sample-player", 40, 89306},    // Janna
        {"sample-player", 117, 59486},   // Lulu
    };
}

}  // namespace lolrec::test

#endif  // LOLREC_TESTS_SUPPORT_HPP
