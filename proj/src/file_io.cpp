#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "binary_io.hpp"
#include "svp/error.hpp"

namespace svp {

const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDegenerateGeometry: return "degenerate-geometry";
    case ErrorCode::kDegenerateScale: return "degenerate-scale";
    case ErrorCode::kDegenerateAlignment: return "degenerate-alignment";
    case ErrorCode::kOrientationFlip: return "orientation-flip";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kCorruptTable: return "corrupt-table";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kConsistency: return "consistency";
  }
  return "unknown";
}

namespace detail {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::kIo, "read failed for '" + path + "'");
  }
  return buffer.str();
}

void WriteFileAtomic(const std::string& path, const std::string& bytes) {
  static std::atomic<uint64_t> counter{0};
  const std::string tmp = path + ".tmp." +
                          std::to_string(std::hash<std::thread::id>{}(
                              std::this_thread::get_id())) +
                          "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot move temp file onto '" + path + "'");
  }
}

}  // namespace detail
}  // namespace svp
