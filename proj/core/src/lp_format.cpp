#include <ostream>
#include <string>

#include "tripmatch/lp.hpp"

namespace tripmatch {

namespace {

// LP-format identifiers may not start with a digit or contain most symbols.
std::string sanitize(const std::string& raw, const char* prefix, std::size_t index) {
  if (raw.empty()) return prefix + std::to_string(index);
  std::string out;
  for (char ch : raw) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '_' || ch == '.';
    out.push_back(ok ? ch : '_');
  }
  if (out.front() >= '0' && out.front() <= '9') out.insert(0, prefix);
  return out;
}

void write_term(std::ostream& out, double coef, const std::string& name, bool first) {
  if (coef < 0.0) {
    out << " - ";
    coef = -coef;
  } else if (!first) {
    out << " + ";
  } else {
    out << ' ';
  }
  out << coef << ' ' << name;
}

}  // namespace

void write_lp_format(const LinearProgram& lp, std::ostream& out) {
  std::vector<std::string> names(lp.variable_count());
  for (std::size_t j = 0; j < names.size(); ++j) {
    names[j] = sanitize(j < lp.variable_names.size() ? lp.variable_names[j] : std::string{}, "x",
                        j);
  }
  const auto old_precision = out.precision(17);

  out << "Minimize\n obj:";
  bool first = true;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (lp.objective[j] == 0.0) continue;
    write_term(out, lp.objective[j], names[j], first);
    first = false;
  }
  if (first) out << " 0 " << names.front();
  out << "\nSubject To\n";
  for (std::size_t r = 0; r < lp.row_count(); ++r) {
    const auto& row = lp.rows[r];
    out << ' ' << sanitize(row.name, "r", r) << ':';
    first = true;
    for (const auto& t : row.terms) {
      write_term(out, t.coef, names[t.var], first);
      first = false;
    }
    if (first) out << " 0 " << names.front();
    switch (row.relation) {
      case Relation::kLessEqual:
        out << " <= ";
        break;
      case Relation::kGreaterEqual:
        out << " >= ";
        break;
      case Relation::kEqual:
        out << " = ";
        break;
    }
    out << row.rhs << '\n';
  }
  out << "End\n";
  out.precision(old_precision);
}

}  // namespace tripmatch
