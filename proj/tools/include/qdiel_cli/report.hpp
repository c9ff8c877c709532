#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace qdiel::cli {

struct Check {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
};

struct Note {
  std::string name;
  std::string text;
};

class Report {
public:
  // Passes when residual <= tolerance (NaN fails).
  void check(std::string name, double residual, double tolerance);
  void flag(std::string name, bool passed);
  void info(std::string name, std::string text);

  const std::vector<Check>& checks() const noexcept { return checks_; }
  const std::vector<Note>& notes() const noexcept { return notes_; }
  bool all_passed() const noexcept;
  int passed() const noexcept;
  int failed() const noexcept;

  // One line per check ("PASS  name  residual=...  tol=...") then INFO lines.
  void write(std::ostream& os) const;

private:
  std::vector<Check> checks_;
  std::vector<Note> notes_;
};

// Writes `content` to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// "%.3e"
std::string format_residual(double v);

}  // namespace qdiel::cli
