#pragma once

#include <functional>
#include <iosfwd>
#include <string>

namespace polypin {

/// Shortest round-trip decimal form of a double ("nan"/"inf" spelled out).
std::string fmt_double(double x);

/// Writes through a temporary file in the same directory, then renames it over `path`.
/// On any exception the temporary is removed and nothing is left behind.
void write_atomically(const std::string& path, const std::function<void(std::ostream&)>& body);

} // namespace polypin
