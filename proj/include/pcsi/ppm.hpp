#pragma once

// Binary PPM (P6, maxval 255) input and output.  The one raster format
// every image tool speaks, and trivial to verify byte for byte.

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "image_model.hpp"

namespace pcsi {

namespace detail {

inline int ppm_token(std::istream& is) {
    // Skips whitespace and '#' comments, then reads one decimal token.
    int c = is.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = is.get();
        } else if (!std::isspace(c)) {
            break;
        }
        c = is.get();
    }
    if (c == EOF || !std::isdigit(c)) throw std::runtime_error("malformed ppm header");
    long v = 0;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        if (v > 1000000) throw std::runtime_error("ppm header value out of range");
        c = is.get();
    }
    if (c != EOF) is.unget();
    return static_cast<int>(v);
}

} // namespace detail

inline Image load_ppm(std::istream& is) {
    char magic[2] = {0, 0};
    is.read(magic, 2);
    if (!is || magic[0] != 'P' || magic[1] != '6')
        throw std::runtime_error("not a binary ppm (P6) file");
    const int width = detail::ppm_token(is);
    const int height = detail::ppm_token(is);
    const int maxval = detail::ppm_token(is);
    if (maxval != 255) throw std::runtime_error("ppm maxval must be 255");
    is.get();  // single whitespace after maxval
    Image image(width, height);
    is.read(reinterpret_cast<char*>(image.data().data()),
            static_cast<std::streamsize>(image.data().size()));
    if (static_cast<std::size_t>(is.gcount()) != image.data().size())
        throw std::runtime_error("ppm pixel data truncated");
    return image;
}

inline Image load_ppm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    return load_ppm(f);
}

inline void save_ppm(std::ostream& os, const Image& image) {
    os << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
    os.write(reinterpret_cast<const char*>(image.data().data()),
             static_cast<std::streamsize>(image.data().size()));
}

inline void save_ppm(const std::string& path, const Image& image) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    save_ppm(f, image);
}

} // namespace pcsi
