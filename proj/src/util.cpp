#include "acer/util.hpp"

#include <fstream>
#include <sstream>

namespace acer {

std::string hex64(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw DataError("read failed: " + path.string());
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << content;
  out.flush();
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace acer
