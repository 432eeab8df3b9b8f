#ifndef FLOWCAT_ERROR_HPP
#define FLOWCAT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace flowcat {

// Malformed input or a violated precondition.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical check failed; `details` carries machine-readable lines.
class CheckFailure : public std::runtime_error {
 public:
  CheckFailure(const std::string& what, std::vector<std::string> details = {})
      : std::runtime_error(what), details_(std::move(details)) {}
  const std::vector<std::string>& details() const { return details_; }

 private:
  std::vector<std::string> details_;
};

// pass/fail with the violations found, in discovery order.
struct Report {
  bool ok = true;
  std::vector<std::string> violations;
  std::vector<std::string> notes;

  void fail(std::string msg) {
    ok = false;
    violations.push_back(std::move(msg));
  }
  void note(std::string msg) { notes.push_back(std::move(msg)); }
  void merge(const Report& other, const std::string& prefix = "") {
    if (!other.ok) ok = false;
    for (const auto& v : other.violations) violations.push_back(prefix + v);
    for (const auto& v : other.notes) notes.push_back(prefix + v);
  }
};

}  // namespace flowcat

#endif
