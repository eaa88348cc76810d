#include "bellforge/io.hpp"

#include <fstream>
#include <sstream>

namespace bellforge {

using nlohmann::json;

namespace {

json table_to_json(const Scenario& s, const std::function<double(int, int, int, int)>& get) {
  json p = json::array();
  for (int x = 0; x < s.settings_a; ++x) {
    json px = json::array();
    for (int y = 0; y < s.settings_b; ++y) {
      json pxy = json::array();
      for (int a = 0; a < s.outcomes; ++a) {
        json row = json::array();
        for (int b = 0; b < s.outcomes; ++b) row.push_back(get(a, b, x, y));
        pxy.push_back(std::move(row));
      }
      px.push_back(std::move(pxy));
    }
    p.push_back(std::move(px));
  }
  return p;
}

Scenario scenario_from_json(const json& j) {
  const int m = j.at("m").get<int>();
  const int n = j.at("n").get<int>();
  return Scenario::square(m, n);
}

void fill_table(const json& p, const Scenario& s,
                const std::function<double&(int, int, int, int)>& at) {
  if (static_cast<int>(p.size()) != s.settings_a) throw ShapeError("json table: bad x extent");
  for (int x = 0; x < s.settings_a; ++x) {
    if (static_cast<int>(p[x].size()) != s.settings_b) throw ShapeError("json table: bad y extent");
    for (int y = 0; y < s.settings_b; ++y) {
      if (static_cast<int>(p[x][y].size()) != s.outcomes)
        throw ShapeError("json table: bad outcome extent");
      for (int a = 0; a < s.outcomes; ++a) {
        if (static_cast<int>(p[x][y][a].size()) != s.outcomes)
          throw ShapeError("json table: bad outcome extent");
        for (int b = 0; b < s.outcomes; ++b) at(a, b, x, y) = p[x][y][a][b].get<double>();
      }
    }
  }
}

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
  return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  const int rows = static_cast<int>(j.size());
  if (rows == 0) throw ShapeError("json matrix: empty");
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols) throw ShapeError("json matrix: ragged rows");
    for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace

json to_json(const Correlation& p) {
  const Scenario& s = p.scenario();
  if (s.settings_a != s.settings_b)
    throw ShapeError("correlation json schema assumes equal setting counts");
  json j;
  j["m"] = s.settings_a;
  j["n"] = s.outcomes;
  j["p"] = table_to_json(s, [&](int a, int b, int x, int y) { return p(a, b, x, y); });
  return j;
}

Correlation correlation_from_json(const json& j) {
  Correlation p(scenario_from_json(j));
  fill_table(j.at("p"), p.scenario(),
             [&](int a, int b, int x, int y) -> double& { return p.at(a, b, x, y); });
  return p;
}

json to_json(const BellFunctional& f) {
  const Scenario& s = f.scenario();
  if (s.settings_a != s.settings_b)
    throw ShapeError("functional json schema assumes equal setting counts");
  json j;
  j["m"] = s.settings_a;
  j["n"] = s.outcomes;
  j["p"] = table_to_json(s, [&](int a, int b, int x, int y) { return f(a, b, x, y); });
  j["offset"] = f.constant_offset;
  j["name"] = f.name;
  if (f.known_local_bound)
    j["local_bound"] = *f.known_local_bound;
  else
    j["local_bound"] = nullptr;
  return j;
}

BellFunctional functional_from_json(const json& j) {
  BellFunctional f(scenario_from_json(j), j.value("name", std::string{}));
  fill_table(j.at("p"), f.scenario(),
             [&](int a, int b, int x, int y) -> double& { return f.at(a, b, x, y); });
  f.constant_offset = j.value("offset", 0.0);
  if (j.contains("local_bound") && !j["local_bound"].is_null())
    f.known_local_bound = j["local_bound"].get<double>();
  return f;
}

json to_json(const QuantumStrategy& s) {
  json j;
  j["dims"] = json::array({state_dim_a(s.state), state_dim_b(s.state)});
  json state;
  if (const Ket* k = std::get_if<Ket>(&s.state)) {
    state["kind"] = "ket";
    json data = json::array();
    for (Eigen::Index i = 0; i < k->amplitudes.size(); ++i)
      data.push_back(complex_to_json(k->amplitudes(i)));
    state["data"] = std::move(data);
  } else {
    state["kind"] = "rho";
    state["data"] = matrix_to_json(std::get<DensityOperator>(s.state).rho);
  }
  j["state"] = std::move(state);
  auto party = [&](const std::vector<Measurement>& ms) {
    json out = json::array();
    for (const auto& m : ms) {
      json setting = json::array();
      for (const auto& e : m.effects) setting.push_back(matrix_to_json(e));
      out.push_back(std::move(setting));
    }
    return out;
  };
  j["alice"] = party(s.alice);
  j["bob"] = party(s.bob);
  return j;
}

QuantumStrategy strategy_from_json(const json& j) {
  QuantumStrategy s;
  const auto& dims = j.at("dims");
  const int da = dims.at(0).get<int>();
  const int db = dims.at(1).get<int>();
  const auto& state = j.at("state");
  const std::string kind = state.at("kind").get<std::string>();
  if (kind == "ket") {
    Ket k;
    k.dim_a = da;
    k.dim_b = db;
    const auto& data = state.at("data");
    k.amplitudes = Vector(data.size());
    for (size_t i = 0; i < data.size(); ++i) k.amplitudes(i) = complex_from_json(data[i]);
    s.state = std::move(k);
  } else if (kind == "rho") {
    s.state = DensityOperator{matrix_from_json(state.at("data")), da, db};
  } else {
    throw std::invalid_argument("strategy json: state kind must be 'ket' or 'rho'");
  }
  auto party = [&](const json& arr) {
    std::vector<Measurement> ms;
    for (const auto& setting : arr) {
      Measurement m;
      for (const auto& e : setting) m.effects.push_back(matrix_from_json(e));
      ms.push_back(std::move(m));
    }
    return ms;
  };
  s.alice = party(j.at("alice"));
  s.bob = party(j.at("bob"));
  return s;
}

Correlation load_correlation(const std::string& path) {
  return correlation_from_json(load_file(path));
}

BellFunctional load_functional(const std::string& path) {
  return functional_from_json(load_file(path));
}

QuantumStrategy load_strategy(const std::string& path) {
  return strategy_from_json(load_file(path));
}

std::string format_sig9(double v) {
  std::ostringstream ss;
  ss.precision(9);
  ss << v;
  return ss.str();
}

}  // namespace bellforge
