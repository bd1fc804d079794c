#ifndef MDSLB_IO_HPP
#define MDSLB_IO_HPP

#include <string>

namespace mdslb {

// Write body to path via a temp file and rename, so readers never observe a
// partial file. Throws IoError.
void atomic_write_text(const std::string& path, const std::string& body);

// Identifier of this build (git describe at configure time, or "unknown").
std::string build_id();

// Round-trip decimal formatting for doubles, used by every CSV/JSON writer
// so outputs are byte-stable.
std::string fmt_double(double v);

} // namespace mdslb

#endif
