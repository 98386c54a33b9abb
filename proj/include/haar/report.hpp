#ifndef HAAR_REPORT_HPP
#define HAAR_REPORT_HPP

#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace haar
{

struct Violation
{
  std::string axiom;
  std::vector<std::string> witnesses;
  std::string detail;

  bool operator==(const Violation &) const = default;
};

// Result of an exhaustive check. Violations are data; a failing check never
// throws. Notes record conditions that hold vacuously at finite scale
// (continuity, properness, compact supports) so they are not silently dropped.
class ValidationReport
{
public:
  ValidationReport() = default;
  explicit ValidationReport(std::string subject) : _subject(std::move(subject)) {}

  bool passed() const { return _violations.empty(); }
  const std::string &subject() const { return _subject; }
  const std::vector<Violation> &violations() const { return _violations; }
  const std::vector<std::pair<std::string, std::string>> &notes() const { return _notes; }

  void add(std::string axiom, std::vector<std::string> witnesses, std::string detail = {})
  {
    _violations.push_back({std::move(axiom), std::move(witnesses), std::move(detail)});
  }

  void note(std::string condition, std::string status)
  {
    _notes.emplace_back(std::move(condition), std::move(status));
  }

  // Appends everything from another report, prefixing its axiom names.
  void merge(const ValidationReport &other, const std::string &prefix = {})
  {
    for (const auto &v : other._violations)
      _violations.push_back({prefix + v.axiom, v.witnesses, v.detail});
    for (const auto &n : other._notes)
      _notes.emplace_back(prefix + n.first, n.second);
  }

  bool has(const std::string &axiom) const
  {
    for (const auto &v : _violations)
      if (v.axiom == axiom)
        return true;
    return false;
  }

  const Violation *first(const std::string &axiom) const
  {
    for (const auto &v : _violations)
      if (v.axiom == axiom)
        return &v;
    return nullptr;
  }

private:
  std::string _subject;
  std::vector<Violation> _violations;
  std::vector<std::pair<std::string, std::string>> _notes;
};

inline std::ostream &operator<<(std::ostream &os, const ValidationReport &r)
{
  os << (r.subject().empty() ? "check" : r.subject()) << ": " << (r.passed() ? "passed" : "FAILED") << '\n';
  for (const auto &v : r.violations())
  {
    os << "  violation [" << v.axiom << "]";
    if (!v.witnesses.empty())
    {
      os << " witness (";
      for (std::size_t i = 0; i < v.witnesses.size(); ++i)
        os << (i ? ", " : "") << v.witnesses[i];
      os << ")";
    }
    if (!v.detail.empty())
      os << ": " << v.detail;
    os << '\n';
  }
  for (const auto &[cond, status] : r.notes())
    os << "  note [" << cond << "] " << status << '\n';
  return os;
}

/// Malformed input or a violated precondition of a constructor.
class InputError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Composition requested on a pair that is not composable.
class CompositionError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// A validation step inside a construction failed. Carries the stage name and
/// the full report.
class ValidationError : public std::runtime_error
{
public:
  ValidationError(std::string stage, ValidationReport report)
    : std::runtime_error(stage + ": " + describe(report)), _stage(std::move(stage)), _report(std::move(report))
  {}

  const std::string &stage() const { return _stage; }
  const ValidationReport &report() const { return _report; }

private:
  static std::string describe(const ValidationReport &r)
  {
    if (r.passed())
      return "passed";
    const auto &v = r.violations().front();
    std::string s = v.axiom;
    if (!v.witnesses.empty())
    {
      s += " (";
      for (std::size_t i = 0; i < v.witnesses.size(); ++i)
        s += (i ? ", " : "") + v.witnesses[i];
      s += ")";
    }
    if (!v.detail.empty())
      s += ": " + v.detail;
    return s;
  }

  std::string _stage;
  ValidationReport _report;
};

/// Throws ValidationError tagged with `stage` unless the report passed.
inline void require(const ValidationReport &r, const std::string &stage)
{
  if (!r.passed())
    throw ValidationError(stage, r);
}

} // namespace haar

#endif // HAAR_REPORT_HPP
