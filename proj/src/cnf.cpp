#include "rmpn/cnf.hpp"

#include <fstream>
#include <sstream>

namespace rmpn {

void CnfFormula::validate() const {
  if (num_symbols < 0) throw CnfError("negative symbol count");
  for (size_t i = 0; i < clauses.size(); ++i) {
    const auto& clause = clauses[i];
    if (clause.empty())
      throw CnfError("clause " + std::to_string(i + 1) +
                     " is empty (formula unsatisfiable)");
    std::vector<int> seen(num_symbols, 0);  // 0 unseen, 1 positive, 2 negated
    for (const Literal& lit : clause) {
      if (lit.symbol < 0 || lit.symbol >= num_symbols)
        throw CnfError("clause " + std::to_string(i + 1) +
                       " references symbol out of range");
      int pol = lit.negated ? 2 : 1;
      if (seen[lit.symbol] != 0 && seen[lit.symbol] != pol)
        throw CnfError("clause " + std::to_string(i + 1) +
                       " holds both polarities of one symbol");
      seen[lit.symbol] = pol;
    }
  }
}

MissionConstraints encode_cnf(const CnfFormula& f) {
  f.validate();
  MissionConstraints sc;
  sc.num_symbols = f.num_symbols;
  sc.rows.reserve(f.clauses.size());
  sc.rhs.reserve(f.clauses.size());
  for (const auto& clause : f.clauses) {
    std::vector<std::int8_t> row(f.num_symbols, 0);
    int negated = 0;
    for (const Literal& lit : clause) {
      if (lit.negated) {
        row[lit.symbol] = 1;
        ++negated;
      } else {
        row[lit.symbol] = -1;
      }
    }
    sc.rows.push_back(std::move(row));
    sc.rhs.push_back(negated - 1);
  }
  return sc;
}

bool eval_cnf(const CnfFormula& f, const std::vector<int>& x) {
  for (const auto& clause : f.clauses) {
    bool satisfied = false;
    for (const Literal& lit : clause) {
      bool v = x[lit.symbol] != 0;
      if (v != lit.negated) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) return false;
  }
  return true;
}

bool check_constraints(const MissionConstraints& sc, const std::vector<int>& x) {
  for (int i = 0; i < sc.num_rows(); ++i) {
    long long lhs = 0;
    for (int j = 0; j < sc.num_symbols; ++j) lhs += sc.rows[i][j] * x[j];
    if (lhs > sc.rhs[i]) return false;
  }
  return true;
}

CnfFormula parse_dimacs(std::istream& in) {
  CnfFormula f;
  bool header_seen = false;
  int expected_clauses = 0;
  std::vector<Literal> current;
  std::string tok;
  int line = 1;
  auto fail = [&](const std::string& msg) {
    throw CnfParseError("line " + std::to_string(line) + ": " + msg);
  };
  std::string raw;
  while (std::getline(in, raw)) {
    std::istringstream ls(raw);
    ls >> tok;
    if (!ls && tok.empty()) {
      ++line;
      continue;
    }
    if (tok == "c" || tok.starts_with("c")) {
      ++line;
      continue;
    }
    if (tok == "p") {
      std::string kind;
      if (!(ls >> kind) || kind != "cnf") fail("expected 'p cnf <vars> <clauses>'");
      if (!(ls >> f.num_symbols >> expected_clauses)) fail("bad header counts");
      if (f.num_symbols < 0 || expected_clauses < 0) fail("negative header counts");
      header_seen = true;
      ++line;
      continue;
    }
    if (!header_seen) fail("clause before 'p cnf' header");
    std::istringstream body(raw);
    long long v;
    while (body >> v) {
      if (v == 0) {
        if (current.empty()) fail("empty clause");
        f.clauses.push_back(current);
        current.clear();
      } else {
        long long sym = (v > 0 ? v : -v) - 1;
        if (sym >= f.num_symbols) fail("literal out of declared range");
        current.push_back({static_cast<int>(sym), v < 0});
      }
    }
    ++line;
  }
  if (!header_seen) throw CnfParseError("missing 'p cnf' header");
  if (!current.empty()) throw CnfParseError("last clause not terminated by 0");
  if (expected_clauses != static_cast<int>(f.clauses.size()))
    throw CnfParseError("header declares " + std::to_string(expected_clauses) +
                        " clauses, found " + std::to_string(f.clauses.size()));
  try {
    f.validate();
  } catch (const CnfError& e) {
    throw CnfParseError(e.what());
  }
  return f;
}

CnfFormula parse_dimacs_string(const std::string& text) {
  std::istringstream ss(text);
  return parse_dimacs(ss);
}

CnfFormula load_cnf(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CnfError("cannot open: " + path);
  return parse_dimacs(in);
}

std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_symbols << " " << f.clauses.size() << "\n";
  for (const auto& clause : f.clauses) {
    for (const Literal& lit : clause)
      out << (lit.negated ? -(lit.symbol + 1) : (lit.symbol + 1)) << " ";
    out << "0\n";
  }
  return out.str();
}

}  // namespace rmpn
