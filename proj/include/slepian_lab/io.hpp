#ifndef SLEPIAN_LAB_IO_HPP
#define SLEPIAN_LAB_IO_HPP

#include <cstdio>
#include <fstream>
#include <locale>
#include <ostream>
#include <stdexcept>
#include <string>

namespace slepian_lab::io {

/// Floats in artifacts carry 9 significant digits, '.' decimal, no locale.
inline std::string g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os.imbue(std::locale::classic());
    return os;
}

}  // namespace slepian_lab::io

#endif
