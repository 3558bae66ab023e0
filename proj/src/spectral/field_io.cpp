#include "scatrec/spectral/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace scatrec::spectral {

static_assert(std::endian::native == std::endian::little,
              "NLSF I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'N', 'L', 'S', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is, const std::filesystem::path& path) {
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T)))
        throw std::runtime_error("read_field: truncated header in " + path.string());
    return v;
}

}  // namespace

void write_field(const std::filesystem::path& path, const ComplexField& field) {
    require_space(field, Space::physical, "write_field");
    const auto& g = field.grid();
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("write_field: cannot open " + tmp.string());
        os.write(kMagic, 4);
        put<std::uint32_t>(os, kVersion);
        put<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim()));
        put<std::uint32_t>(os, static_cast<std::uint32_t>(g.points_per_axis()));
        put<double>(os, g.half_width());
        const auto v = field.values();
        os.write(reinterpret_cast<const char*>(v.data()),
                 static_cast<std::streamsize>(v.size() * sizeof(cplx)));
        if (!os) throw std::runtime_error("write_field: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

ComplexField read_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field: cannot open " + path.string());
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("read_field: bad magic in " + path.string());
    const auto version = get<std::uint32_t>(is, path);
    if (version != kVersion)
        throw std::runtime_error("read_field: unsupported version " + std::to_string(version));
    const auto d = get<std::uint32_t>(is, path);
    const auto n = get<std::uint32_t>(is, path);
    const auto L = get<double>(is, path);
    ComplexField field(make_grid(static_cast<int>(d), static_cast<int>(n), L));
    auto v = field.values();
    if (!is.read(reinterpret_cast<char*>(v.data()),
                 static_cast<std::streamsize>(v.size() * sizeof(cplx))))
        throw std::runtime_error("read_field: truncated data in " + path.string());
    if (is.peek() != std::char_traits<char>::eof())
        throw std::runtime_error("read_field: trailing bytes in " + path.string());
    return field;
}

}  // namespace scatrec::spectral
