#include "vexinf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace vexinf {

std::string format_value(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

void atomic_write_text(const std::filesystem::path& path,
                       const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("atomic_write_text: cannot open " +
                                     tmp.string());
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("atomic_write_text: write failed for " +
                                     tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignore;
        std::filesystem::remove(tmp, ignore);
        throw std::runtime_error("atomic_write_text: rename failed for " +
                                 path.string() + ": " + ec.message());
    }
}

void write_csv(const std::filesystem::path& path, const GridFunction& u) {
    const Domain& d = u.domain();
    std::string body = "x,y,value\n";
    for (int j = 0; j < d.ny(); ++j)
        for (int i = 0; i < d.nx(); ++i) {
            const auto pos = d.position(i, j);
            const double value = d.is_active(i, j) ? u.at(i, j) : 0.0;
            body += format_value(pos[0]);
            body += ',';
            body += format_value(pos[1]);
            body += ',';
            body += format_value(value);
            body += '\n';
        }
    atomic_write_text(path, body);
}

void write_pgm(const std::filesystem::path& path, const GridFunction& u) {
    const Domain& d = u.domain();
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (int j = 0; j < d.ny(); ++j)
        for (int i = 0; i < d.nx(); ++i) {
            if (!d.is_active(i, j)) continue;
            const double v = u.at(i, j);
            lo = first ? v : std::min(lo, v);
            hi = first ? v : std::max(hi, v);
            first = false;
        }
    const double span = hi - lo;
    std::ostringstream out;
    out << "P2\n" << d.nx() << ' ' << d.ny() << "\n255\n";
    for (int j = d.ny() - 1; j >= 0; --j) {
        for (int i = 0; i < d.nx(); ++i) {
            int pixel = 0;
            if (d.is_active(i, j) && span > 0.0) {
                pixel = static_cast<int>(
                    std::lround((u.at(i, j) - lo) / span * 255.0));
                pixel = std::min(255, std::max(0, pixel));
            }
            out << pixel << (i + 1 < d.nx() ? ' ' : '\n');
        }
    }
    atomic_write_text(path, out.str());
}

GridFunction read_csv(const std::filesystem::path& path, DomainPtr domain) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("read_csv: cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "x,y,value")
        throw std::runtime_error("read_csv: missing x,y,value header in " +
                                 path.string());
    GridFunction u(domain);
    const Domain& d = *domain;
    for (int j = 0; j < d.ny(); ++j)
        for (int i = 0; i < d.nx(); ++i) {
            if (!std::getline(in, line))
                throw std::runtime_error("read_csv: truncated file " +
                                         path.string());
            double x = 0.0, y = 0.0, v = 0.0;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &v) != 3)
                throw std::runtime_error("read_csv: malformed row '" + line +
                                         "' in " + path.string());
            const auto pos = d.position(i, j);
            if (std::abs(x - pos[0]) > 1e-9 || std::abs(y - pos[1]) > 1e-9)
                throw std::runtime_error(
                    "read_csv: node coordinates out of order in " +
                    path.string());
            if (d.is_active(i, j) && !std::isfinite(v))
                throw std::runtime_error(
                    "read_csv: non-finite value at an active node in " +
                    path.string());
            u.at(i, j) = d.is_active(i, j) ? v : 0.0;
        }
    if (std::getline(in, line) && !line.empty())
        throw std::runtime_error("read_csv: trailing rows in " +
                                 path.string());
    return u;
}

}  // namespace vexinf
