#include "qdiel_cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace qdiel::cli {

void Report::check(std::string name, double residual, double tolerance) {
  checks_.push_back({std::move(name), residual <= tolerance, residual, tolerance});
}

void Report::flag(std::string name, bool passed) {
  checks_.push_back({std::move(name), passed, std::nan(""), std::nan("")});
}

void Report::info(std::string name, std::string text) { notes_.push_back({std::move(name), std::move(text)}); }

bool Report::all_passed() const noexcept {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.passed; });
}

int Report::passed() const noexcept {
  return static_cast<int>(std::count_if(checks_.begin(), checks_.end(), [](const Check& c) { return c.passed; }));
}

int Report::failed() const noexcept { return static_cast<int>(checks_.size()) - passed(); }

void Report::write(std::ostream& os) const {
  for (const Check& c : checks_) {
    os << (c.passed ? "PASS  " : "FAIL  ") << c.name;
    if (!std::isnan(c.tolerance)) {
      os << "  residual=" << format_residual(c.residual) << "  tol=" << format_residual(c.tolerance);
    }
    os << '\n';
  }
  for (const Note& n : notes_) os << "INFO  " << n.name << "  " << n.text << '\n';
  os << "summary: " << passed() << " passed, " << failed() << " failed\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string format_residual(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace qdiel::cli
