#include "thermotomo/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "thermotomo/errors.hpp"

namespace thermotomo::io {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put(std::string& out, T value) {
    char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    out.append(buf, sizeof(T));
}

class Reader {
public:
    Reader(std::string_view bytes, const char* what) : bytes_(bytes), what_(what) {}

    template <typename T>
    T get() {
        need(sizeof(T));
        char buf[sizeof(T)];
        std::memcpy(buf, bytes_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
        T value;
        std::memcpy(&value, buf, sizeof(T));
        pos_ += sizeof(T);
        return value;
    }

    void magic(const char (&tag)[5]) {
        need(4);
        if (bytes_.substr(0, 4) != std::string_view(tag, 4)) {
            throw FormatError(std::string(what_) + ": bad magic, expected \"" + tag + "\"", 0);
        }
        pos_ = 4;
    }

    void version() {
        const std::size_t at = pos_;
        const auto v = get<std::uint32_t>();
        if (v != 1) throw FormatError(std::string(what_) + ": unsupported version " + std::to_string(v), at);
    }

    void payload(std::size_t n_bytes) {
        if (bytes_.size() - pos_ != n_bytes) {
            throw FormatError(std::string(what_) + ": payload length mismatch, expected " + std::to_string(n_bytes) +
                                  " bytes, found " + std::to_string(bytes_.size() - pos_),
                              std::min(bytes_.size(), pos_ + n_bytes));
        }
    }

    std::size_t pos() const noexcept { return pos_; }

private:
    void need(std::size_t n) {
        if (bytes_.size() - pos_ < n) {
            throw FormatError(std::string(what_) + ": truncated header, expected " + std::to_string(n) +
                                  " more bytes, found " + std::to_string(bytes_.size() - pos_),
                              bytes_.size());
        }
    }

    std::string_view bytes_;
    const char* what_;
    std::size_t pos_ = 0;
};

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what, std::size_t at) {
    if (a != 0 && b > UINT64_MAX / a) throw FormatError(std::string(what) + ": size overflow", at);
    return a * b;
}

}  // namespace

std::string encode_grid(const ScalarField& field) {
    const Grid& g = field.grid();
    std::string out;
    out.reserve(kGridHeaderBytes + 8 * g.size());
    out.append("TAWG", 4);
    put<std::uint32_t>(out, 1);
    put<std::uint64_t>(out, g.nx);
    put<std::uint64_t>(out, g.ny);
    put<double>(out, g.ox);
    put<double>(out, g.oy);
    put<double>(out, g.h);
    for (double v : field.values()) put<double>(out, v);
    return out;
}

ScalarField decode_grid(std::string_view bytes) {
    Reader r(bytes, "TAWG");
    r.magic("TAWG");
    r.version();
    const auto nx = r.get<std::uint64_t>();
    const auto ny = r.get<std::uint64_t>();
    const auto ox = r.get<double>();
    const auto oy = r.get<double>();
    const auto h = r.get<double>();
    const std::size_t n = checked_mul(nx, ny, "TAWG", 8);
    r.payload(checked_mul(n, 8, "TAWG", 8));
    Grid g;
    try {
        g = Grid(nx, ny, h, ox, oy);
    } catch (const ConfigError& e) {
        throw FormatError(std::string("TAWG: invalid grid header: ") + e.what(), 8);
    }
    std::vector<double> values(n);
    for (double& v : values) v = r.get<double>();
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(values[k])) throw FormatError("TAWG: non-finite value", kGridHeaderBytes + 8 * k);
    }
    return ScalarField(g, std::move(values));
}

std::string encode_trace(const BoundaryTrace& trace) {
    std::string out;
    out.reserve(kTraceHeaderBytes + 16 * trace.n_det() + 8 * trace.values.size());
    out.append("TAWS", 4);
    put<std::uint32_t>(out, 1);
    put<std::uint64_t>(out, trace.n_times);
    put<std::uint64_t>(out, trace.n_det());
    put<double>(out, trace.dt);
    for (const auto& p : trace.points) {
        put<double>(out, p[0]);
        put<double>(out, p[1]);
    }
    for (double v : trace.values) put<double>(out, v);
    return out;
}

BoundaryTrace decode_trace(std::string_view bytes) {
    Reader r(bytes, "TAWS");
    r.magic("TAWS");
    r.version();
    BoundaryTrace tr;
    tr.n_times = r.get<std::uint64_t>();
    const auto n_det = r.get<std::uint64_t>();
    tr.dt = r.get<double>();
    const std::uint64_t n_vals = checked_mul(tr.n_times, n_det, "TAWS", 8);
    r.payload(checked_mul(n_det, 16, "TAWS", 16) + checked_mul(n_vals, 8, "TAWS", 8));
    if (!(tr.dt > 0.0) || !std::isfinite(tr.dt)) throw FormatError("TAWS: time step must be positive", 24);
    tr.points.resize(n_det);
    for (auto& p : tr.points) {
        p[0] = r.get<double>();
        p[1] = r.get<double>();
    }
    tr.values.resize(n_vals);
    for (double& v : tr.values) {
        const std::size_t at = r.pos();
        v = r.get<double>();
        if (!std::isfinite(v)) throw FormatError("TAWS: non-finite value", at);
    }
    return tr;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw ConfigError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw ConfigError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void write_grid(const std::filesystem::path& path, const ScalarField& field) {
    write_file_atomic(path, encode_grid(field));
}

ScalarField read_grid(const std::filesystem::path& path) { return decode_grid(read_file(path)); }

void write_trace(const std::filesystem::path& path, const BoundaryTrace& trace) {
    write_file_atomic(path, encode_trace(trace));
}

BoundaryTrace read_trace(const std::filesystem::path& path) { return decode_trace(read_file(path)); }

std::vector<std::uint16_t> pgm_pixels(const ScalarField& field, std::optional<std::pair<double, double>> range) {
    double lo, hi;
    if (range) {
        std::tie(lo, hi) = *range;
    } else {
        const auto [mn, mx] = std::minmax_element(field.values().begin(), field.values().end());
        lo = *mn;
        hi = *mx;
    }
    if (!(hi != lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw ConfigError("emit_pgm: degenerate intensity range");
    }
    std::vector<std::uint16_t> px;
    px.reserve(field.size());
    for (double v : field.values()) {
        const double t = std::clamp(std::round((v - lo) / (hi - lo) * 65535.0), 0.0, 65535.0);
        px.push_back(static_cast<std::uint16_t>(t));
    }
    return px;
}

void emit_pgm(const ScalarField& field, const std::filesystem::path& path,
              std::optional<std::pair<double, double>> range) {
    const auto px = pgm_pixels(field, range);
    std::string out = "P5\n" + std::to_string(field.grid().nx) + " " + std::to_string(field.grid().ny) + "\n65535\n";
    out.reserve(out.size() + 2 * px.size());
    for (std::uint16_t p : px) {
        out.push_back(static_cast<char>(p >> 8));
        out.push_back(static_cast<char>(p & 0xff));
    }
    write_file_atomic(path, out);
}

}  // namespace thermotomo::io
