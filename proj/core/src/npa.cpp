#include "bellforge/npa.hpp"

#include <algorithm>
#include <ostream>

namespace bellforge {

std::optional<NpaWord> npa_reduce(NpaWord w) {
  NpaWord parts[2];
  for (const auto& l : w) parts[l.party].push_back(l);
  NpaWord out;
  for (const auto& part : parts) {
    size_t keep = out.size();
    for (const auto& l : part) {
      if (out.size() > keep && out.back().setting == l.setting) {
        if (out.back().outcome == l.outcome) continue;  // idempotent
        return std::nullopt;                            // orthogonal within a setting
      }
      out.push_back(l);
    }
  }
  return out;
}

NpaWord npa_adjoint(const NpaWord& w) {
  NpaWord parts[2];
  for (const auto& l : w) parts[l.party].push_back(l);
  NpaWord out;
  for (auto& part : parts) {
    std::reverse(part.begin(), part.end());
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

NpaWord npa_canonical(const NpaWord& w) { return std::min(w, npa_adjoint(w)); }

std::optional<NpaWord> npa_swap(const NpaWord& w) {
  NpaWord sw = w;
  for (auto& l : sw) l.party = 1 - l.party;
  return npa_reduce(std::move(sw));
}

NpaLevel npa_level_from_string(const std::string& s) {
  if (s == "1") return NpaLevel::level1;
  if (s == "1ab" || s == "1+ab" || s == "1+AB") return NpaLevel::level1_ab;
  if (s == "2") return NpaLevel::level2;
  throw std::invalid_argument("npa level: expected one of 1, 1ab, 2");
}

namespace {

std::vector<NpaWord> build_index_words(const Scenario& s, NpaLevel level) {
  std::vector<NpaWord> singles[2];
  const int m[2] = {s.settings_a, s.settings_b};
  for (int party = 0; party < 2; ++party)
    for (int x = 0; x < m[party]; ++x)
      for (int a = 0; a < s.outcomes - 1; ++a) singles[party].push_back({{party, x, a}});

  std::vector<NpaWord> words;
  words.push_back({});
  for (int party = 0; party < 2; ++party)
    words.insert(words.end(), singles[party].begin(), singles[party].end());

  if (level == NpaLevel::level1) return words;

  std::vector<NpaWord> pairs[2];
  for (int party = 0; party < 2; ++party)
    for (const auto& u : singles[party])
      for (const auto& v : singles[party])
        if (u[0].setting != v[0].setting) pairs[party].push_back({u[0], v[0]});

  auto concat = [](const NpaWord& u, const NpaWord& v) {
    NpaWord w = u;
    w.insert(w.end(), v.begin(), v.end());
    return w;
  };

  for (const auto& u : singles[0])
    for (const auto& v : singles[1]) words.push_back(concat(u, v));
  if (level == NpaLevel::level1_ab) return words;

  for (int party = 0; party < 2; ++party)
    words.insert(words.end(), pairs[party].begin(), pairs[party].end());
  for (const auto& u : pairs[0])
    for (const auto& v : singles[1]) words.push_back(concat(u, v));
  for (const auto& u : singles[0])
    for (const auto& v : pairs[1]) words.push_back(concat(u, v));
  return words;
}

MomentMatrix build_structure(const Scenario& s, NpaLevel level, bool twirled) {
  MomentMatrix m;
  m.scenario = s;
  m.level = level;
  m.twirled = twirled;
  m.index_words = build_index_words(s, level);
  const int nn = m.size();
  m.entry_class = Eigen::MatrixXi::Constant(nn, nn, -1);

  auto class_key = [&](const NpaWord& w) {
    NpaWord key = npa_canonical(w);
    if (twirled) {
      if (auto sw = npa_swap(key)) key = std::min(key, npa_canonical(*sw));
    }
    return key;
  };

  for (int i = 0; i < nn; ++i) {
    NpaWord left = npa_adjoint(m.index_words[i]);
    for (int j = 0; j < nn; ++j) {
      NpaWord prod = left;
      prod.insert(prod.end(), m.index_words[j].begin(), m.index_words[j].end());
      auto reduced = npa_reduce(std::move(prod));
      if (!reduced) continue;
      const NpaWord key = class_key(*reduced);
      auto [it, inserted] = m.class_of.try_emplace(key, m.variable_count());
      if (inserted) m.class_representative.push_back(key);
      m.entry_class(i, j) = it->second;
    }
  }
  m.identity_class = m.class_of.at({});
  return m;
}

int lookup_class(const MomentMatrix& m, const NpaWord& w) {
  NpaWord key = npa_canonical(w);
  if (m.twirled) {
    if (auto sw = npa_swap(key)) key = std::min(key, npa_canonical(*sw));
  }
  const auto it = m.class_of.find(key);
  if (it == m.class_of.end())
    throw std::logic_error("npa objective: word missing from the moment structure");
  return it->second;
}

}  // namespace

MomentMatrix npa_moment_structure(const Scenario& s, NpaLevel level) {
  return build_structure(s, level, false);
}

MomentMatrix twirl(const MomentMatrix& m) {
  if (m.scenario.settings_a != m.scenario.settings_b)
    throw ShapeError("twirl: party swap needs equal setting counts");
  return build_structure(m.scenario, m.level, true);
}

MomentObjective npa_objective(const BellFunctional& f, const MomentMatrix& m) {
  const Scenario& s = f.scenario();
  if (!(s == m.scenario)) throw ShapeError("npa objective: scenario mismatch");
  const int n = s.outcomes;
  MomentObjective obj;
  obj.coefficients.assign(m.variable_count(), 0.0);
  obj.constant = f.constant_offset;

  auto add_word = [&](double c, const NpaWord& w) {
    if (c != 0.0) obj.coefficients[lookup_class(m, w)] += c;
  };
  for (int x = 0; x < s.settings_a; ++x)
    for (int y = 0; y < s.settings_b; ++y)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double c = f(a, b, x, y);
          if (c == 0.0) continue;
          // Collins-Gisin elimination of the last outcome on either side
          if (a < n - 1 && b < n - 1) {
            add_word(c, {{0, x, a}, {1, y, b}});
          } else if (a == n - 1 && b < n - 1) {
            add_word(c, {{1, y, b}});
            for (int ap = 0; ap < n - 1; ++ap) add_word(-c, {{0, x, ap}, {1, y, b}});
          } else if (a < n - 1 && b == n - 1) {
            add_word(c, {{0, x, a}});
            for (int bp = 0; bp < n - 1; ++bp) add_word(-c, {{0, x, a}, {1, y, bp}});
          } else {
            obj.constant += c;
            for (int ap = 0; ap < n - 1; ++ap) add_word(-c, {{0, x, ap}});
            for (int bp = 0; bp < n - 1; ++bp) add_word(-c, {{1, y, bp}});
            for (int ap = 0; ap < n - 1; ++ap)
              for (int bp = 0; bp < n - 1; ++bp) add_word(c, {{0, x, ap}, {1, y, bp}});
          }
        }
  return obj;
}

SdpProblem npa_assemble(const BellFunctional& f, const MomentMatrix& m) {
  const MomentObjective obj = npa_objective(f, m);
  const int nn = m.size();
  const int nv = m.variable_count();

  std::vector<std::vector<SdpEntry>> indicator(nv);
  for (int i = 0; i < nn; ++i)
    for (int j = i; j < nn; ++j) {
      const int cid = m.entry_class(i, j);
      if (cid >= 0) indicator[cid].push_back({i, j, 1.0});
    }

  // (D)-side encoding: Z = sum_j y_j E_j + E_id >= 0, min sum (-c_j) y_j;
  // the Bell bound is -(optimum) + constant.
  SdpProblem p;
  p.dim = nn;
  for (const auto& e : indicator[m.identity_class]) p.objective.push_back({e.row, e.col, -e.value});
  for (int cid = 0; cid < nv; ++cid) {
    if (cid == m.identity_class) continue;
    p.constraints.push_back({indicator[cid], -obj.coefficients[cid]});
  }
  return p;
}

NpaBound npa_upper_bound(const BellFunctional& f, NpaLevel level, bool symmetric,
                         double tolerance) {
  MomentMatrix m = npa_moment_structure(f.scenario(), level);
  if (symmetric) m = twirl(m);
  const MomentObjective obj = npa_objective(f, m);
  const SdpProblem p = npa_assemble(f, m);
  const SdpSolution sol = solve_sdp(p, tolerance);

  NpaBound out;
  out.status = sol.status;
  // the solver aims for `tolerance`; a 1e-8-quality iterate still counts as
  // a successful bound
  if (out.status != SdpStatus::optimal &&
      std::max({sol.gap, sol.primal_residual, sol.dual_residual}) <= 1e-8)
    out.status = SdpStatus::optimal;
  out.solver_gap = sol.gap;
  out.moment_matrix_size = m.size();
  out.variables = m.variable_count();
  const double id_coeff = obj.coefficients[m.identity_class];
  out.value = -sol.dual_value + id_coeff + obj.constant;
  return out;
}

void export_sdpa(const SdpProblem& p, std::ostream& out) {
  out << p.constraints.size() << " = mDIM\n1 = nBLOCK\n" << p.dim << " = bLOCKsTRUCT\n";
  for (size_t i = 0; i < p.constraints.size(); ++i)
    out << p.constraints[i].rhs << (i + 1 < p.constraints.size() ? " " : "");
  out << "\n";
  auto dump = [&](int idx, const std::vector<SdpEntry>& entries, double sign) {
    for (const auto& e : entries)
      out << idx << " 1 " << (e.row + 1) << " " << (e.col + 1) << " " << sign * e.value << "\n";
  };
  // SDPA: X = sum x_i F_i - F_0 >= 0, min c.x; our C plays -F_0
  dump(0, p.objective, -1.0);
  for (size_t i = 0; i < p.constraints.size(); ++i)
    dump(static_cast<int>(i + 1), p.constraints[i].entries, 1.0);
}

}  // namespace bellforge
