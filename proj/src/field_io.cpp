#include "fpp/field_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace fpp {

namespace {

template <typename T>
void put_le(unsigned char* dst, T value) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(value);
    for (std::size_t b = 0; b < sizeof(T); ++b) dst[b] = static_cast<unsigned char>(u >> (8 * b));
}

template <typename T>
T get_le(const unsigned char* src) {
    using U = std::make_unsigned_t<T>;
    U u = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) u |= static_cast<U>(static_cast<U>(src[b]) << (8 * b));
    return static_cast<T>(u);
}

}  // namespace

void write_field(std::ostream& out, const FieldSample& field) {
    std::array<unsigned char, kFieldHeaderBytes> header{};
    std::memcpy(header.data(), "FPBW", 4);
    put_le<std::uint16_t>(header.data() + 4, kFieldDumpVersion);
    header[6] = static_cast<unsigned char>(field.spec.kind);
    header[7] = static_cast<unsigned char>(field.spec.n);
    put_le<std::uint32_t>(header.data() + 8, static_cast<std::uint32_t>(field.spec.gamma_cells));
    put_le<std::int64_t>(header.data() + 16, field.spec.origin.x);
    put_le<std::int64_t>(header.data() + 24, field.spec.origin.y);
    out.write(reinterpret_cast<const char*>(header.data()), header.size());

    std::array<unsigned char, 8> buf{};
    for (double v : field.values) {
        put_le<std::uint64_t>(buf.data(), std::bit_cast<std::uint64_t>(v));
        out.write(reinterpret_cast<const char*>(buf.data()), buf.size());
    }
    if (!out) throw std::runtime_error("failed to write field dump");
}

FieldSample read_field(std::istream& in) {
    std::array<unsigned char, kFieldHeaderBytes> header{};
    in.read(reinterpret_cast<char*>(header.data()), header.size());
    if (!in || std::memcmp(header.data(), "FPBW", 4) != 0)
        throw std::runtime_error("not a field dump (bad magic)");
    if (get_le<std::uint16_t>(header.data() + 4) != kFieldDumpVersion)
        throw std::runtime_error("unsupported field dump version");
    if (header[6] > static_cast<unsigned char>(FieldKind::TildeChi))
        throw std::runtime_error("unknown field kind in dump");

    FieldSample field;
    field.spec.kind = static_cast<FieldKind>(header[6]);
    field.spec.n = header[7];
    field.spec.gamma_cells = static_cast<int>(get_le<std::uint32_t>(header.data() + 8));
    field.spec.origin = {get_le<std::int64_t>(header.data() + 16),
                         get_le<std::int64_t>(header.data() + 24)};
    field.spec.validate(62);

    const auto count = static_cast<std::size_t>(field.spec.rect().area());
    field.values.resize(count);
    std::array<unsigned char, 8> buf{};
    for (auto& v : field.values) {
        in.read(reinterpret_cast<char*>(buf.data()), buf.size());
        if (!in) throw std::runtime_error("truncated field dump");
        v = std::bit_cast<double>(get_le<std::uint64_t>(buf.data()));
    }
    return field;
}

void write_field_file(const std::string& path, const FieldSample& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_field(out, field);
}

FieldSample read_field_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_field(in);
}

}  // namespace fpp
