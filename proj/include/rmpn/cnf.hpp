#pragma once
// Boolean missions in CNF and their compilation to linear inequalities
// over the binary region-visitation vector.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmpn {

struct CnfError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CnfParseError : CnfError {
  using CnfError::CnfError;
};

struct Literal {
  int symbol = 0;
  bool negated = false;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct CnfFormula {
  int num_symbols = 0;
  std::vector<std::vector<Literal>> clauses;

  /// Throws CnfError on empty clauses, out-of-range symbols, or a clause
  /// holding both polarities of one symbol.
  void validate() const;
};

/// One inequality row per clause: -1 where a symbol appears positively,
/// +1 where negated, rhs = negated-literal count minus one. A binary x
/// satisfies every row exactly when it satisfies the formula.
struct MissionConstraints {
  int num_symbols = 0;
  std::vector<std::vector<std::int8_t>> rows;
  std::vector<int> rhs;

  int num_rows() const { return static_cast<int>(rows.size()); }
};

MissionConstraints encode_cnf(const CnfFormula& f);

/// Semantic truth of the formula under a binary assignment.
bool eval_cnf(const CnfFormula& f, const std::vector<int>& x);

/// Componentwise rows * x <= rhs.
bool check_constraints(const MissionConstraints& sc, const std::vector<int>& x);

/// DIMACS-style text: "p cnf <symbols> <clauses>" header, clauses as
/// integer lists terminated by 0, negative meaning negated, 'c' comments.
CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs_string(const std::string& text);
CnfFormula load_cnf(const std::string& path);
std::string to_dimacs(const CnfFormula& f);

}  // namespace rmpn
