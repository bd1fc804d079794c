#include "mdslb/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mdslb/types.hpp"

#ifndef MDSLB_BUILD_ID
#define MDSLB_BUILD_ID "unknown"
#endif

namespace mdslb {

void atomic_write_text(const std::string& path, const std::string& body) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp(path + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f << body;
    f.flush();
    if (!f) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("rename to " + target.string() + " failed: " + ec.message());
}

std::string build_id() { return MDSLB_BUILD_ID; }

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace mdslb
