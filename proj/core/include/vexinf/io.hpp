#pragma once

#include <filesystem>
#include <string>

#include "vexinf/grid.hpp"

namespace vexinf {

// Atomically replaces path with content: writes to a sibling temp file and
// renames over the target. Throws std::runtime_error on any filesystem error.
void atomic_write_text(const std::filesystem::path& path,
                       const std::string& content);

// CSV with header "x,y,value", one row per node in row-major order, values
// printed with 17 significant digits; nodes outside the active region write
// value 0. Atomic.
void write_csv(const std::filesystem::path& path, const GridFunction& u);

// Plain-text PGM (P2), maxval 255, min-max normalized over active nodes;
// a constant field maps to 0. Outside nodes render as 0. Row 0 of the image
// is the top of the domain (j = ny-1). Atomic.
void write_pgm(const std::filesystem::path& path, const GridFunction& u);

// Reads a write_csv-format file back onto the given domain. Every node must
// be covered exactly once in row-major order and coordinates must match the
// node layout to within 1e-9. Throws std::runtime_error on malformed input.
GridFunction read_csv(const std::filesystem::path& path, DomainPtr domain);

// Formats a double with 17 significant digits (round-trip exact).
std::string format_value(double v);

}  // namespace vexinf
