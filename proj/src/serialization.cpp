#include "slimtt/serialization.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace slimtt {

namespace {

constexpr char kMagic[8] = {'S', 'L', 'I', 'M', 'T', 'T', '0', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw std::runtime_error("tt container: truncated header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_doubles(std::ostream& out, const std::vector<double>& v) {
    // Host doubles are IEEE-754 little-endian on every supported target.
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void get_doubles(std::istream& in, std::vector<double>& v) {
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in) throw std::runtime_error("tt container: truncated core data");
}

void write_header(std::ostream& out, char kind, const Shape& shape,
                  const std::vector<int>& ranks) {
    out.write(kMagic, 8);
    out.put(kind);
    out.put(shape.cyclic() ? 1 : 0);
    put_u32(out, static_cast<std::uint32_t>(shape.order()));
    for (int n : shape.modes()) put_u32(out, static_cast<std::uint32_t>(n));
    for (int r : ranks) put_u32(out, static_cast<std::uint32_t>(r));
}

ContainerInfo read_header(std::istream& in) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("tt container: bad magic");
    ContainerInfo info;
    info.kind = static_cast<char>(in.get());
    info.cyclic = in.get() != 0;
    const std::uint32_t d = get_u32(in);
    if (d == 0 || d > 1u << 20) throw std::runtime_error("tt container: implausible order");
    info.modes.resize(d);
    for (auto& n : info.modes) n = static_cast<int>(get_u32(in));
    info.ranks.resize(d + 1);
    for (auto& r : info.ranks) r = static_cast<int>(get_u32(in));
    return info;
}

} // namespace

void save_tt(const TtTensor& t, std::ostream& out) {
    write_header(out, 'T', t.shape(), t.ranks());
    for (const auto& c : t.cores()) put_doubles(out, c.data());
}

void save_tt(const TtOperator& a, std::ostream& out) {
    write_header(out, 'O', a.shape(), a.ranks());
    for (const auto& c : a.cores()) put_doubles(out, c.data());
}

void save_tt_file(const TtTensor& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    save_tt(t, out);
}

void save_tt_file(const TtOperator& a, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    save_tt(a, out);
}

ContainerInfo peek_tt(std::istream& in) { return read_header(in); }

ContainerInfo peek_tt_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_header(in);
}

TtTensor load_tt_tensor(std::istream& in) {
    const ContainerInfo info = read_header(in);
    if (info.kind != 'T') throw std::runtime_error("tt container: expected a tensor");
    Shape shape(info.modes, info.cyclic);
    std::vector<Core3> cores;
    for (int i = 0; i < shape.order(); ++i) {
        Core3 c(info.ranks[static_cast<std::size_t>(i)], shape.mode(i),
                info.ranks[static_cast<std::size_t>(i + 1)]);
        get_doubles(in, c.data());
        cores.push_back(std::move(c));
    }
    return {std::move(shape), std::move(cores)};
}

TtOperator load_tt_operator(std::istream& in) {
    const ContainerInfo info = read_header(in);
    if (info.kind != 'O') throw std::runtime_error("tt container: expected an operator");
    Shape shape(info.modes, info.cyclic);
    std::vector<Core4> cores;
    for (int i = 0; i < shape.order(); ++i) {
        Core4 c(info.ranks[static_cast<std::size_t>(i)], shape.mode(i),
                info.ranks[static_cast<std::size_t>(i + 1)]);
        get_doubles(in, c.data());
        cores.push_back(std::move(c));
    }
    return {std::move(shape), std::move(cores)};
}

TtTensor load_tt_tensor_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_tt_tensor(in);
}

TtOperator load_tt_operator_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_tt_operator(in);
}

} // namespace slimtt
