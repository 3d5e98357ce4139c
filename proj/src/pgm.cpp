#include "grpdal/pgm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "grpdal/error.hpp"

namespace grpdal {

namespace {

struct Reader {
    std::string data;
    std::size_t pos = 0;
    std::string path;

    [[noreturn]] void fail(const std::string& what) const {
        throw IoError(path + ": " + what + " at byte " + std::to_string(pos));
    }

    int get() {
        if (pos >= data.size()) fail("unexpected end of file");
        return static_cast<unsigned char>(data[pos++]);
    }

    // skips whitespace and '#' comments
    void skip_space() {
        while (pos < data.size()) {
            const unsigned char c = data[pos];
            if (c == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else if (std::isspace(c)) {
                ++pos;
            } else {
                break;
            }
        }
    }

    long token_int() {
        skip_space();
        if (pos >= data.size()) fail("unexpected end of header");
        if (!std::isdigit(static_cast<unsigned char>(data[pos]))) fail("expected an integer");
        long v = 0;
        while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) {
            v = v * 10 + (data[pos] - '0');
            if (v > 1000000000L) fail("integer out of range");
            ++pos;
        }
        return v;
    }
};

}  // namespace

Image read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open");
    Reader r;
    r.path = path;
    std::ostringstream ss;
    ss << in.rdbuf();
    r.data = ss.str();

    if (r.data.size() < 2 || r.data[0] != 'P') r.fail("not a PGM (missing magic)");
    const char kind = r.data[1];
    if (kind != '2' && kind != '5') r.fail("unsupported PGM kind (want P2 or P5)");
    r.pos = 2;
    const long w = r.token_int();
    const long h = r.token_int();
    const long maxval = r.token_int();
    if (w < 1 || h < 1) r.fail("bad dimensions");
    if (maxval < 1 || maxval > 65535) r.fail("maxval out of range (1..65535)");

    Image img;
    img.h = static_cast<std::size_t>(h);
    img.w = static_cast<std::size_t>(w);
    img.pixels.resize(img.h * img.w);
    const double inv = 1.0 / static_cast<double>(maxval);

    if (kind == '2') {
        for (double& px : img.pixels) {
            const long v = r.token_int();
            if (v > maxval) r.fail("pixel exceeds maxval");
            px = static_cast<double>(v) * inv;
        }
    } else {
        // single whitespace byte after maxval, then raw samples
        r.get();
        const bool two_byte = maxval > 255;
        for (double& px : img.pixels) {
            long v = r.get();
            if (two_byte) v = (v << 8) | r.get();  // big-endian
            if (v > maxval) r.fail("pixel exceeds maxval");
            px = static_cast<double>(v) * inv;
        }
    }
    return img;
}

namespace {
int quantize(double v) {
    const double c = std::clamp(v, 0.0, 1.0);
    return static_cast<int>(std::lround(c * 255.0));
}
}  // namespace

void write_pgm(const std::string& path, const Image& img) {
    if (img.pixels.size() != img.h * img.w) throw InvalidArgument("write_pgm: bad image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << "P5\n" << img.w << " " << img.h << "\n255\n";
    for (double px : img.pixels) out.put(static_cast<char>(quantize(px)));
    if (!out) throw IoError(path + ": write failed");
}

void write_pgm_ascii(const std::string& path, const Image& img) {
    if (img.pixels.size() != img.h * img.w) throw InvalidArgument("write_pgm_ascii: bad image");
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << "P2\n" << img.w << " " << img.h << "\n255\n";
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        out << quantize(img.pixels[i]);
        out << (((i + 1) % img.w == 0) ? '\n' : ' ');
    }
    if (!out) throw IoError(path + ": write failed");
}

}  // namespace grpdal
