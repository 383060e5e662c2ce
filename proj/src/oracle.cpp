#include "grothlin/oracle.hpp"

#include <algorithm>
#include <set>

#include "grothlin/error.hpp"
#include "grothlin/qe.hpp"

namespace grothlin {

namespace {

// Exact rank of the linear parts (constants ignored).
int rank_of(std::vector<std::vector<Rational>> rows) {
  int rank = 0;
  if (rows.empty()) return 0;
  std::size_t cols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][c].is_zero()) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c].is_zero()) continue;
      Rational factor = rows[i][c] / rows[r][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= factor * rows[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

std::optional<Conj> raw_project(Conj cur, const std::vector<int>& vars) {
  for (int v : vars) {
    auto next = eliminate_var(v, cur);
    if (!next) return std::nullopt;
    cur = std::move(*next);
  }
  return cur;
}

// Face bounded in coordinate i, in the given direction: is there a bound B
// with the face on its inner side? Decided by eliminating the coordinates
// from face ∧ (B < x_i) (resp. x_i < B) and looking at the residual
// constraints on B: no residual means every B is escaped, i.e. unbounded.
bool bounded_in(const Conj& face, int n, int i, bool above) {
  int cap = n + 1;
  LinTerm b = LinTerm::variable(cap, n);
  LinTerm xi = LinTerm::variable(cap, i);
  std::vector<Atom> atoms;
  for (const Atom& a : face) atoms.emplace_back(a.term().widened(cap), a.rel());
  atoms.emplace_back(above ? b - xi : xi - b, Rel::LT);
  std::vector<int> xs(n);
  for (int v = 0; v < n; ++v) xs[v] = v;
  auto residual = raw_project(make_conj(std::move(atoms)), xs);
  if (!residual) return true;  // no face point on the far side of any B
  return !residual->empty();
}

struct Enumerator {
  const std::vector<LinTerm>& fns;
  int n;
  std::vector<Face>& out;
  std::vector<int> signs;

  void run(std::size_t i, const Conj& conj) {
    if (!conj_satisfiable(conj)) return;
    if (i == fns.size()) {
      Face face;
      face.signs = signs;
      std::vector<std::vector<Rational>> zero_rows;
      for (std::size_t k = 0; k < fns.size(); ++k) {
        if (signs[k] != 0) continue;
        std::vector<Rational> row(n, Rational(0));
        for (const auto& [v, c] : fns[k].coeffs()) row[v] = c;
        zero_rows.push_back(std::move(row));
      }
      face.dim = n - rank_of(std::move(zero_rows));
      auto witness = find_witness(conj, n);
      if (!witness) throw Error("realizable face lost its witness");
      face.witness = std::move(*witness);
      face.bounded = true;
      for (int v = 0; v < n && face.bounded; ++v)
        face.bounded = bounded_in(conj, n, v, true) && bounded_in(conj, n, v, false);
      out.push_back(std::move(face));
      return;
    }
    const LinTerm& t = fns[i];
    for (int sign : {-1, 0, 1}) {
      signs.push_back(sign);
      std::vector<Atom> atoms(conj.begin(), conj.end());
      switch (sign) {
        case -1: atoms.emplace_back(t, Rel::LT); break;
        case 0: atoms.emplace_back(t, Rel::EQ); break;
        default: atoms.emplace_back(-t, Rel::LT); break;
      }
      run(i + 1, make_conj(std::move(atoms)));
      signs.pop_back();
    }
  }
};

}  // namespace

Arrangement arrangement_faces(const DefSet& s, const OracleCaps& caps) {
  if (s.dim > caps.max_dim)
    throw CapExceeded("oracle ambient dimension cap exceeded");
  std::set<LinTerm> closure;
  for (const Conj& d : s.disjuncts)
    for (const Atom& a : d) closure.insert(a.term().normalized().first);
  if (closure.size() > caps.max_functionals)
    throw CapExceeded("oracle functional cap exceeded");
  for (int v = 0; v < s.dim; ++v) closure.insert(LinTerm::variable(s.dim, v));
  Arrangement arr;
  arr.functionals.assign(closure.begin(), closure.end());
  Enumerator e{arr.functionals, s.dim, arr.faces, {}};
  e.run(0, Conj{});
  return arr;
}

std::pair<long long, long long> oracle_chi(const DefSet& s, const OracleCaps& caps) {
  Arrangement arr = arrangement_faces(s, caps);
  long long g = 0, b = 0;
  for (const Face& face : arr.faces) {
    if (!s.contains(face.witness)) continue;
    long long sign = face.dim % 2 == 0 ? 1 : -1;
    g += sign;
    if (face.bounded) b += sign;
  }
  return {g, b};
}

}  // namespace grothlin
