#pragma once

#include <fstream>
#include <sstream>
#include <string>

#ifndef GLYPHPRESS_DATA_DIR
#define GLYPHPRESS_DATA_DIR "tests/data"
#endif

inline std::string data_path(const std::string& name) {
  return std::string(GLYPHPRESS_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}
