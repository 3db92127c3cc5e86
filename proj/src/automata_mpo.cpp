#include "qatn/automata_mpo.hpp"

#include <set>
#include <string>

#include "qatn/errors.hpp"

namespace qatn {

template <class Payload>
BasicRuleTable<Payload>::BasicRuleTable(int left_dim, int right_dim)
    : left_dim_(left_dim), right_dim_(right_dim) {
  if (left_dim < 1 || right_dim < 1) throw InvalidArgument("rule table dimensions must be >= 1");
}

template <class Payload>
BasicRuleTable<Payload>& BasicRuleTable<Payload>::add(int left, int right, Payload payload, cplx coeff) {
  auto resolve = [](int idx, int dim, const char* side) {
    const int r = idx < 0 ? dim + 1 + idx : idx;
    if (r < 1 || r > dim) {
      throw InvalidArgument(std::string("rule ") + side + " index " + std::to_string(idx) +
                            " outside 1.." + std::to_string(dim));
    }
    return r;
  };
  rules_.push_back({resolve(left, left_dim_, "left"), resolve(right, right_dim_, "right"),
                    std::move(payload), coeff});
  return *this;
}

template class BasicRuleTable<Eigen::Matrix2cd>;
template class BasicRuleTable<Eigen::Vector2cd>;

namespace pauli {
Eigen::Matrix2cd identity() { return Eigen::Matrix2cd::Identity(); }
Eigen::Matrix2cd x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
Eigen::Matrix2cd y() {
  Eigen::Matrix2cd m;
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
Eigen::Matrix2cd z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

Eigen::Vector2cd ket_down() { return {1.0, 0.0}; }
Eigen::Vector2cd ket_up() { return {0.0, 1.0}; }

OperatorAlphabet::OperatorAlphabet() {
  ops_["I"] = pauli::identity();
  ops_["X"] = pauli::x();
  ops_["Y"] = pauli::y();
  ops_["Z"] = pauli::z();
}

void OperatorAlphabet::define(const std::string& name, const Eigen::Matrix2cd& op) { ops_[name] = op; }

const Eigen::Matrix2cd& OperatorAlphabet::at(const std::string& name) const {
  auto it = ops_.find(name);
  if (it == ops_.end()) throw InvalidArgument("unknown operator symbol '" + name + "'");
  return it->second;
}

namespace {

template <class Payload>
void check_chain(const std::vector<BasicRuleTable<Payload>>& tables) {
  if (tables.empty()) throw TableChainError("at least one rule table is required");
  for (std::size_t k = 0; k + 1 < tables.size(); ++k) {
    if (tables[k].right_dim() != tables[k + 1].left_dim()) {
      throw TableChainError("table " + std::to_string(k) + " right_dim " +
                            std::to_string(tables[k].right_dim()) + " != table " + std::to_string(k + 1) +
                            " left_dim " + std::to_string(tables[k + 1].left_dim()));
    }
  }
  for (std::size_t k = 0; k < tables.size(); ++k) {
    std::set<std::pair<int, int>> cells;
    for (const auto& r : tables[k].rules()) {
      if (!cells.insert({r.left, r.right}).second) {
        throw DuplicateRuleError("table " + std::to_string(k) + " has two rules for cell (" +
                                 std::to_string(r.left) + "," + std::to_string(r.right) + ")");
      }
    }
  }
}

// Bond window kept for site k: the first site keeps row 1, the last keeps
// its last column.
struct Window {
  int row_lo, row_hi, col_lo, col_hi;
};

template <class Payload>
Window window(const std::vector<BasicRuleTable<Payload>>& tables, std::size_t k) {
  const auto& t = tables[k];
  Window w{1, t.left_dim(), 1, t.right_dim()};
  if (k == 0) w.row_hi = 1;
  if (k + 1 == tables.size()) w.col_lo = t.right_dim();
  return w;
}

}  // namespace

Mpo mpo_from_tables(const std::vector<RuleTable>& tables) {
  check_chain(tables);
  Mpo h;
  for (std::size_t k = 0; k < tables.size(); ++k) {
    const auto w = window(tables, k);
    const auto rows = static_cast<std::size_t>(w.row_hi - w.row_lo + 1);
    const auto cols = static_cast<std::size_t>(w.col_hi - w.col_lo + 1);
    Tensor t({rows, 2, 2, cols});
    for (const auto& r : tables[k].rules()) {
      if (r.left < w.row_lo || r.left > w.row_hi || r.right < w.col_lo || r.right > w.col_hi) continue;
      const auto i = static_cast<std::size_t>(r.left - w.row_lo);
      const auto j = static_cast<std::size_t>(r.right - w.col_lo);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) t({i, a, b, j}) = r.coeff * r.payload(a, b);
    }
    h.sites.push_back(std::move(t));
  }
  return h;
}

Mps mps_from_tables(const std::vector<KetTable>& tables) {
  check_chain(tables);
  Mps m;
  for (std::size_t k = 0; k < tables.size(); ++k) {
    const auto w = window(tables, k);
    const auto rows = static_cast<std::size_t>(w.row_hi - w.row_lo + 1);
    const auto cols = static_cast<std::size_t>(w.col_hi - w.col_lo + 1);
    Tensor t({rows, 2, cols});
    for (const auto& r : tables[k].rules()) {
      if (r.left < w.row_lo || r.left > w.row_hi || r.right < w.col_lo || r.right > w.col_hi) continue;
      const auto i = static_cast<std::size_t>(r.left - w.row_lo);
      const auto j = static_cast<std::size_t>(r.right - w.col_lo);
      for (std::size_t a = 0; a < 2; ++a) t({i, a, j}) = r.coeff * r.payload(a);
    }
    m.sites.push_back(std::move(t));
  }
  return m;
}

std::vector<RuleTable> annealing_tables(const IsingModel& ising, double s) {
  const int n = static_cast<int>(ising.n);
  if (n < 2) throw InvalidArgument("annealing_tables requires N >= 2");
  if (s < 0.0 || s > 1.0) throw InvalidArgument("annealing parameter s must lie in [0, 1]");
  if (ising.h.size() != ising.n) throw ShapeError("Ising field vector length does not match n");

  const auto I = pauli::identity();
  const auto X = pauli::x();
  const auto Z = pauli::z();
  const int half = n / 2;
  const int a = n % 2 == 0 ? 2 : 3;
  // 1-based coupling lookup
  auto J = [&](int i, int k) { return s * ising.coupling(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(k - 1)); };

  std::vector<RuleTable> tables;
  for (int k = 1; k <= n; ++k) {
    int left_dim = 0, right_dim = 0;
    if (k < half) {
      left_dim = k + 2;
      right_dim = k + 3;
    } else if (k == half) {
      left_dim = half + 2;
      right_dim = half + a;
    } else {
      left_dim = n - k + 3;
      right_dim = n - k + 2;
    }
    RuleTable t(left_dim, right_dim);
    const Eigen::Matrix2cd field = -(1.0 - s) * X + s * ising.h[static_cast<std::size_t>(k - 1)] * Z;
    t.add(1, 1, I).add(-1, -1, I).add(-2, -1, Z).add(1, -1, field);

    if (k < half) {
      t.add(1, 2, Z);
      t.add(1, k + 2, Z, J(k, k + 1));
      for (int m = 2; m <= k; ++m) {
        t.add(m, m + 1, I);
        t.add(m, k + 2, I, J(k - m + 1, k + 1));
      }
    } else if (k == half) {
      for (int col = 2; col <= half + a - 1; ++col) {
        t.add(1, col, Z, J(half, n - col + 2));
        for (int m = 2; m <= half; ++m) t.add(m, col, I, J(half - m + 1, n - col + 2));
      }
    } else {
      for (int m = 2; m <= n - k + 1; ++m) {
        t.add(1, m, Z, J(k, n - m + 2));
        t.add(m, m, I);
      }
    }
    tables.push_back(std::move(t));
  }
  return tables;
}

Mpo annealing_mpo(const IsingModel& ising, double s) {
  if (s < 0.0 || s > 1.0) throw InvalidArgument("annealing parameter s must lie in [0, 1]");
  if (ising.n == 0) throw InvalidArgument("annealing_mpo requires at least one spin");
  if (ising.n == 1) {
    if (ising.h.size() != 1) throw ShapeError("Ising field vector length does not match n");
    return single_site_mpo(-(1.0 - s) * pauli::x() + s * ising.h[0] * pauli::z());
  }
  return mpo_from_tables(annealing_tables(ising, s));
}

namespace {

cplx parse_scalar(const nlohmann::json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ParseError("field '" + where + "' must be a number or [re, im]");
}

Eigen::Matrix2cd parse_op(const nlohmann::json& v, const OperatorAlphabet& alphabet, const std::string& where) {
  if (v.is_string()) {
    const auto name = v.get<std::string>();
    if (!alphabet.contains(name)) throw ParseError("field '" + where + "' names unknown operator '" + name + "'");
    return alphabet.at(name);
  }
  if (v.is_array() && v.size() == 2 && v[0].is_array() && v[1].is_array() && v[0].size() == 2 &&
      v[1].size() == 2) {
    Eigen::Matrix2cd m;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) m(r, c) = parse_scalar(v[r][c], where);
    return m;
  }
  throw ParseError("field '" + where + "' must be an operator name or a 2x2 matrix");
}

int parse_int(const nlohmann::json& obj, const char* name, const std::string& where) {
  if (!obj.contains(name) || !obj.at(name).is_number_integer()) {
    throw ParseError("field '" + where + "." + name + "' must be an integer");
  }
  return obj.at(name).get<int>();
}

}  // namespace

std::vector<RuleTable> tables_from_json(const nlohmann::json& j, const OperatorAlphabet& alphabet) {
  if (!j.contains("sites") || !j.at("sites").is_array()) throw ParseError("field 'sites' must be an array");
  std::vector<RuleTable> tables;
  std::size_t k = 0;
  for (const auto& site : j.at("sites")) {
    const std::string where = "sites[" + std::to_string(k) + "]";
    RuleTable t(parse_int(site, "left_dim", where), parse_int(site, "right_dim", where));
    if (!site.contains("rules") || !site.at("rules").is_array()) {
      throw ParseError("field '" + where + ".rules' must be an array");
    }
    std::size_t r = 0;
    for (const auto& rule : site.at("rules")) {
      const std::string rw = where + ".rules[" + std::to_string(r++) + "]";
      if (!rule.contains("op")) throw ParseError("field '" + rw + ".op' is missing");
      const cplx coeff = rule.contains("coeff") ? parse_scalar(rule.at("coeff"), rw + ".coeff") : cplx{1.0, 0.0};
      try {
        t.add(parse_int(rule, "left", rw), parse_int(rule, "right", rw), parse_op(rule.at("op"), alphabet, rw + ".op"),
              coeff);
      } catch (const InvalidArgument& e) {
        throw ParseError("field '" + rw + "': " + e.what());
      }
    }
    tables.push_back(std::move(t));
    ++k;
  }
  return tables;
}

}  // namespace qatn
