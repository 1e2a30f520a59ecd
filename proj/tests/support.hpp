#ifndef GMI_TESTS_SUPPORT_HPP
#define GMI_TESTS_SUPPORT_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gmi/cli.hpp"
#include "gmi/gmi.hpp"

namespace gmi::testing {

inline std::string data_path(const std::string& rel) { return std::string(GMI_DATA_DIR) + "/" + rel; }
inline std::string golden_path(const std::string& rel) { return std::string(GMI_GOLDEN_DIR) + "/" + rel; }

inline std::vector<std::string> bundled_programs() {
    return {data_path("programs/taiko.txt"), data_path("programs/mantle.txt"), data_path("programs/arbitrum.txt"),
            data_path("programs/optimism.txt")};
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

// Scratch file under the system temp dir, removed on destruction.
class TempFile {
public:
    explicit TempFile(const std::string& name, const std::string& content = {})
        : path_((std::filesystem::temp_directory_path() / ("gmi_test_" + name)).string()) {
        write_file(path_, content);
    }
    ~TempFile() { std::filesystem::remove(path_); }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct CliOutcome {
    int code = -1;
    std::string out;
    std::string err;
};

inline CliOutcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "gmi");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliOutcome r;
    r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

// Compares against a golden file; GMI_UPDATE_GOLDENS=1 rewrites it instead.
inline bool matches_golden(const std::string& name, const std::string& actual) {
    const auto path = golden_path(name);
    if (const char* update = std::getenv("GMI_UPDATE_GOLDENS"); update && std::string(update) == "1") {
        write_file(path, actual);
        return true;
    }
    if (!std::filesystem::exists(path)) return false;
    return read_file(path) == actual;
}

} // namespace gmi::testing

#endif // GMI_TESTS_SUPPORT_HPP
