#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "glcf/cli.hpp"

namespace golden {

namespace fs = std::filesystem;

struct Case {
  std::string name;
  std::vector<std::string> args;
  int exit = 0;
};

inline void PrintTo(const Case& c, std::ostream* os) { *os << c.name; }

struct Outcome {
  int code = 0;
  std::string out, err;
};

inline fs::path source_dir() { return fs::path(GLCF_SOURCE_DIR); }
inline fs::path golden_dir() { return source_dir() / "tests" / "golden"; }

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string expand(std::string arg) {
  const std::string key = "{samples}";
  for (auto at = arg.find(key); at != std::string::npos; at = arg.find(key)) {
    arg.replace(at, key.size(), (source_dir() / "samples").string());
  }
  return arg;
}

inline std::vector<Case> load_cases() {
  auto doc = glcf::Json::parse(read_file(golden_dir() / "cases.json"));
  std::vector<Case> v;
  for (const auto& c : doc) {
    Case k{c.at("name").get<std::string>(), {}, c.at("exit").get<int>()};
    for (const auto& a : c.at("args")) k.args.push_back(expand(a.get<std::string>()));
    v.push_back(std::move(k));
  }
  return v;
}

inline Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = glcf::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

inline bool updating() {
  const char* v = std::getenv("GLCF_UPDATE_GOLDEN");
  return v && *v && std::string(v) != "0";
}

/// Empty string when the case matches its recorded output.
inline std::string check(const Case& c) {
  Outcome o = run(c.args);
  fs::path out = golden_dir() / (c.name + ".out"), err = golden_dir() / (c.name + ".err");
  if (updating()) {
    write_file(out, o.out);
    if (!o.err.empty()) write_file(err, o.err);
    else fs::remove(err);
  }
  if (o.code != c.exit) return c.name + ": exit " + std::to_string(o.code) + ", expected " + std::to_string(c.exit);
  if (!fs::exists(out)) return c.name + ": missing " + out.filename().string();
  if (o.out != read_file(out)) return c.name + ": stdout differs from " + out.filename().string();
  std::string want_err = fs::exists(err) ? read_file(err) : "";
  if (o.err != want_err) return c.name + ": stderr differs";
  return "";
}

}  // namespace golden
