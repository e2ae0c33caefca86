#include "app/manifest.hpp"

#include "coco/errors.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>
#include <memory>
#include <set>

namespace coco::app {

#ifndef COCO_VERSION
#define COCO_VERSION "0.0.0"
#endif

const char* const kVersion = COCO_VERSION;

std::string sha256_hex(const std::string& data) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
        throw NumericalError("SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read '" + path.string() + "' for hashing");
    return sha256_hex(std::string(std::istreambuf_iterator<char>(in), {}));
}

void write_manifest(const std::filesystem::path& out_dir, const std::string& command, const Config& config,
                    const std::vector<std::filesystem::path>& inputs) {
    static const std::set<std::string> excluded = {"threads", "parallel_scenarios"};
    std::ofstream out(out_dir / "manifest.txt", std::ios::binary);
    if (!out) throw InvalidArgument("cannot write manifest in '" + out_dir.string() + "'");
    out << "version = " << kVersion << '\n';
    out << "command = " << command << '\n';
    out << "seed = " << config.get_string("seed", "1") << '\n';
    out << "[inputs]\n";
    for (const auto& p : inputs) out << p.filename().string() << " = sha256:" << sha256_file(p) << '\n';
    out << "[config]\n";
    for (const auto& [k, v] : config.values())
        if (!excluded.count(k)) out << k << " = " << v << '\n';
}

} // namespace coco::app
