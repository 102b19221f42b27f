#include "gsac/nn/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gsac/error.hpp"

namespace gsac::nn {

static_assert(std::endian::native == std::endian::little, "parameter container assumes a little-endian host");

namespace {

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw DataError("parameter container is truncated");
    return v;
}

}  // namespace

void write_params(std::ostream& os, const NamedTensors& tensors) {
    os.write(kParamMagic, sizeof(kParamMagic));
    put<std::uint32_t>(os, kParamVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(tensors.size()));
    for (const auto& [name, t] : tensors) {
        put<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        put<std::uint64_t>(os, t.rows());
        put<std::uint64_t>(os, t.cols());
        os.write(reinterpret_cast<const char*>(t.data().data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
    }
}

NamedTensors read_params(std::istream& is) {
    char magic[sizeof(kParamMagic)];
    if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kParamMagic, sizeof(magic)) != 0) {
        throw DataError("not a parameter container (bad magic)");
    }
    const auto version = get<std::uint32_t>(is);
    if (version != kParamVersion) throw DataError("unsupported parameter container version " + std::to_string(version));
    const auto count = get<std::uint32_t>(is);
    NamedTensors out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto len = get<std::uint32_t>(is);
        std::string name(len, '\0');
        if (!is.read(name.data(), len)) throw DataError("parameter container is truncated");
        const auto rows = get<std::uint64_t>(is);
        const auto cols = get<std::uint64_t>(is);
        std::vector<double> data(rows * cols);
        if (!is.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)))) {
            throw DataError("parameter container is truncated");
        }
        out.emplace_back(std::move(name), Tensor(rows, cols, std::move(data)));
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ComputeError("cannot open " + tmp.string() + " for writing");
        os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!os) throw ComputeError("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void save_params(const std::filesystem::path& path, const NamedTensors& tensors) {
    std::ostringstream os(std::ios::binary);
    write_params(os, tensors);
    write_file_atomic(path, os.str());
}

NamedTensors load_params(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open " + path.string());
    return read_params(is);
}

}  // namespace gsac::nn
