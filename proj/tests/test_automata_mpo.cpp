#include <gtest/gtest.h>

#include "qatn/automata_mpo.hpp"
#include "qatn/errors.hpp"
#include "support.hpp"

using namespace qatn;
namespace qt = qatn::testing;

namespace {

// Nearest-neighbour A_i B_{i+1} + B_i A_{i+1}: state 1 = nothing placed,
// 2 = A placed, 3 = B placed, 4 = pair complete.
std::vector<RuleTable> pair_sum_tables(std::size_t n, const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  std::vector<RuleTable> tables;
  for (std::size_t k = 0; k < n; ++k) {
    RuleTable t(4, 4);
    t.add(1, 1, pauli::identity()).add(1, 2, a).add(1, 3, b).add(2, -1, b).add(3, -1, a).add(-1, -1, pauli::identity());
    tables.push_back(t);
  }
  return tables;
}

// Strings containing exactly one block "11" and no other ones.
std::vector<KetTable> two_ones_tables(std::size_t n) {
  std::vector<KetTable> tables;
  for (std::size_t k = 0; k < n; ++k) {
    KetTable t(3, 3);
    t.add(1, 1, ket_down()).add(1, 2, ket_up()).add(2, 3, ket_up()).add(3, 3, ket_down());
    tables.push_back(t);
  }
  return tables;
}

bool accepted(std::size_t idx, std::size_t n) {
  std::size_t ones = 0;
  for (std::size_t k = 0; k < n; ++k) ones += (idx >> k) & 1U;
  if (ones != 2) return false;
  for (std::size_t k = 0; k + 1 < n; ++k)
    if (((idx >> k) & 3U) == 3U) return true;
  return false;
}

}  // namespace

TEST(MpoFromTables, IdentityChain) {
  std::vector<RuleTable> tables(3, RuleTable(1, 1));
  for (auto& t : tables) t.add(1, 1, pauli::identity());
  EXPECT_LE((mpo_to_dense(mpo_from_tables(tables)) - Eigen::MatrixXcd::Identity(8, 8)).norm(), 0.0);
}

TEST(MpoFromTables, CylinderPairSum) {
  const auto h = mpo_to_dense(mpo_from_tables(pair_sum_tables(3, pauli::z(), pauli::x())));
  const Eigen::MatrixXcd ref = qt::embed(qt::pauli_z(), 0, 3) * qt::embed(qt::pauli_x(), 1, 3) +
                               qt::embed(qt::pauli_x(), 0, 3) * qt::embed(qt::pauli_z(), 1, 3) +
                               qt::embed(qt::pauli_z(), 1, 3) * qt::embed(qt::pauli_x(), 2, 3) +
                               qt::embed(qt::pauli_x(), 1, 3) * qt::embed(qt::pauli_z(), 2, 3);
  EXPECT_LE((h - ref).norm(), 1e-14);
}

TEST(MpoFromTables, ZzChain) {
  std::vector<RuleTable> tables;
  for (int k = 0; k < 4; ++k) {
    RuleTable t(3, 3);
    t.add(1, 1, pauli::identity()).add(1, 2, pauli::z()).add(2, 3, pauli::z()).add(3, 3, pauli::identity());
    tables.push_back(t);
  }
  Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(16, 16);
  for (std::size_t i = 0; i + 1 < 4; ++i) ref += qt::embed(qt::pauli_z(), i, 4) * qt::embed(qt::pauli_z(), i + 1, 4);
  EXPECT_LE((mpo_to_dense(mpo_from_tables(tables)) - ref).norm(), 1e-14);
}

TEST(MpoFromTables, BoundarySitesAreSliced) {
  const auto h = mpo_from_tables(pair_sum_tables(4, pauli::z(), pauli::x()));
  EXPECT_EQ(h.sites.front().dim(0), 1u);
  EXPECT_EQ(h.sites.front().dim(3), 4u);
  EXPECT_EQ(h.sites.back().dim(0), 4u);
  EXPECT_EQ(h.sites.back().dim(3), 1u);
}

TEST(MpoFromTables, CoefficientsScaleEntries) {
  RuleTable t(1, 1);
  t.add(1, 1, pauli::z(), cplx(0.0, 2.0));
  const auto d = mpo_to_dense(mpo_from_tables({t}));
  EXPECT_EQ(d(0, 0), cplx(0.0, 2.0));
  EXPECT_EQ(d(1, 1), cplx(0.0, -2.0));
}

TEST(MpoFromTables, ChainMismatchThrows) {
  EXPECT_THROW(mpo_from_tables({}), TableChainError);
  RuleTable a(1, 2), b(3, 1);
  a.add(1, 1, pauli::z());
  b.add(1, 1, pauli::z());
  EXPECT_THROW(mpo_from_tables({a, b}), TableChainError);
}

TEST(MpoFromTables, DuplicateCellThrows) {
  RuleTable t(2, 2);
  t.add(1, 2, pauli::z()).add(1, -1, pauli::x());  // -1 resolves to 2
  EXPECT_THROW(mpo_from_tables({t, t}), DuplicateRuleError);
}

TEST(RuleTable, IndexOutOfRangeThrows) {
  RuleTable t(2, 3);
  EXPECT_THROW(t.add(3, 1, pauli::z()), InvalidArgument);
  EXPECT_THROW(t.add(1, 0, pauli::z()), InvalidArgument);
  EXPECT_THROW(t.add(1, -4, pauli::z()), InvalidArgument);
  EXPECT_THROW(RuleTable(0, 1), InvalidArgument);
}

TEST(RuleTable, NegativeIndicesResolve) {
  RuleTable t(4, 5);
  t.add(-2, -1, pauli::z());
  EXPECT_EQ(t.rules()[0].left, 3);
  EXPECT_EQ(t.rules()[0].right, 5);
}

TEST(MpsFromTables, TwoConsecutiveOnes) {
  const auto v = mps_to_dense(mps_from_tables(two_ones_tables(4)));
  for (Eigen::Index i = 0; i < 16; ++i) {
    const bool on = i == 0b0011 || i == 0b0110 || i == 0b1100;
    EXPECT_EQ(v(i), cplx(on ? 1.0 : 0.0)) << "basis " << i;
  }
}

TEST(MpsFromTables, SinglePathGivesOneBasisState) {
  std::vector<KetTable> tables;
  for (int k = 0; k < 3; ++k) {
    KetTable t(1, 1);
    t.add(1, 1, k == 1 ? ket_up() : ket_down());
    tables.push_back(t);
  }
  const auto v = mps_to_dense(mps_from_tables(tables));
  EXPECT_EQ(v(0b010), cplx(1.0));
  EXPECT_NEAR(v.norm(), 1.0, 0.0);
}

TEST(MpsFromTables, LanguageMatchesEnumeration) {
  const std::size_t n = 5;
  const auto v = mps_to_dense(mps_from_tables(two_ones_tables(n)));
  for (std::size_t i = 0; i < (std::size_t{1} << n); ++i)
    EXPECT_EQ(v(Eigen::Index(i)), cplx(accepted(i, n) ? 1.0 : 0.0)) << "basis " << i;
}

TEST(OperatorAlphabet, BuiltinsAndCustom) {
  OperatorAlphabet a;
  EXPECT_LE((a.at("X") - qt::pauli_x()).norm(), 0.0);
  EXPECT_LE((a.at("Y") * a.at("Y") - qt::pauli_i()).norm(), 1e-15);
  EXPECT_THROW(a.at("Q"), InvalidArgument);
  Eigen::Matrix2cd p;
  p << 1, 0, 0, 0;
  a.define("P0", p);
  EXPECT_TRUE(a.contains("P0"));
  EXPECT_LE((a.at("P0") - p).norm(), 0.0);
}

TEST(AnnealingMpo, ZeroSIsTransverseField) {
  std::mt19937_64 rng(1);
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto ising = qt::random_ising(n, rng);
    Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(1 << n, 1 << n);
    for (std::size_t i = 0; i < n; ++i) ref -= qt::embed(qt::pauli_x(), i, n);
    EXPECT_LE((mpo_to_dense(annealing_mpo(ising, 0.0)) - ref).norm(), 1e-13) << "n=" << n;
  }
}

TEST(AnnealingMpo, ThreeSpinProblemHamiltonian) {
  IsingModel m;
  m.n = 3;
  m.h = {1.0, 0.0, -1.0};
  m.j = {{{0, 1}, 2.0}, {{0, 2}, -1.0}, {{1, 2}, 0.5}};
  const auto d = mpo_to_dense(annealing_mpo(m, 1.0));
  const auto ref = qt::pauli_sum_hamiltonian(m, 1.0);
  for (Eigen::Index i = 0; i < 8; ++i)
    for (Eigen::Index j = 0; j < 8; ++j) EXPECT_NEAR(std::abs(d(i, j) - ref(i, j)), 0.0, 1e-12);
}

TEST(AnnealingMpo, BondDimensionsN6) {
  std::mt19937_64 rng(2);
  const auto h = annealing_mpo(qt::random_ising(6, rng), 0.5);
  std::vector<std::size_t> left;
  for (std::size_t k = 1; k < 6; ++k) left.push_back(h.sites[k].dim(0));
  EXPECT_EQ(left, (std::vector<std::size_t>{4, 5, 5, 4, 3}));
  EXPECT_EQ(h.sites[0].dim(0), 1u);
  EXPECT_EQ(h.sites[5].dim(3), 1u);
}

TEST(AnnealingMpo, TableLeftDimsFollowMinRule) {
  std::mt19937_64 rng(3);
  for (std::size_t n = 2; n <= 9; ++n) {
    const auto tables = annealing_tables(qt::random_ising(n, rng), 0.3);
    ASSERT_EQ(tables.size(), n);
    for (std::size_t k = 2; k <= n; ++k)
      EXPECT_EQ(std::size_t(tables[k - 1].left_dim()), std::min(k + 2, n - k + 3)) << "n=" << n << " k=" << k;
  }
}

TEST(AnnealingMpo, MatchesDenseOracleSweep) {
  std::mt19937_64 rng(4);
  for (std::size_t n = 2; n <= 8; ++n) {
    for (int draw = 0; draw < 50; ++draw) {
      const auto ising = qt::random_ising(n, rng, draw % 3 == 0 ? 0.5 : 1.0);
      for (double s : {0.0, 0.3, 0.7, 1.0}) {
        const double err = (mpo_to_dense(annealing_mpo(ising, s)) - qt::pauli_sum_hamiltonian(ising, s)).norm();
        ASSERT_LE(err, 1e-11) << "n=" << n << " draw=" << draw << " s=" << s;
      }
    }
  }
}

TEST(AnnealingMpo, HermitianAndReal) {
  std::mt19937_64 rng(5);
  for (std::size_t n = 1; n <= 7; ++n) {
    const auto d = mpo_to_dense(annealing_mpo(qt::random_ising(n, rng), 0.6));
    EXPECT_EQ((d - d.adjoint()).norm(), 0.0);
    EXPECT_EQ(d.imag().norm(), 0.0);
  }
}

TEST(AnnealingMpo, LinearInS) {
  std::mt19937_64 rng(6);
  for (std::size_t n = 2; n <= 7; ++n) {
    const auto ising = qt::random_ising(n, rng);
    const auto h0 = mpo_to_dense(annealing_mpo(ising, 0.0));
    const auto h1 = mpo_to_dense(annealing_mpo(ising, 1.0));
    for (double s : {0.1, 0.45, 0.9}) {
      EXPECT_LE((mpo_to_dense(annealing_mpo(ising, s)) - ((1 - s) * h0 + s * h1)).norm(), 1e-12);
    }
  }
}

TEST(AnnealingMpo, OffsetIsNotEmbedded) {
  std::mt19937_64 rng(7);
  auto ising = qt::random_ising(4, rng);
  const auto base = mpo_to_dense(annealing_mpo(ising, 1.0));
  ising.offset = 123.0;
  EXPECT_LE((mpo_to_dense(annealing_mpo(ising, 1.0)) - base).norm(), 0.0);
}

TEST(AnnealingMpo, SingleSpin) {
  IsingModel m;
  m.n = 1;
  m.h = {0.7};
  const double s = 0.25;
  const Eigen::MatrixXcd ref = -(1 - s) * qt::pauli_x() + s * 0.7 * qt::pauli_z();
  const auto h = annealing_mpo(m, s);
  EXPECT_EQ(h.sites[0].dims(), (std::vector<std::size_t>{1, 2, 2, 1}));
  EXPECT_LE((mpo_to_dense(h) - ref).norm(), 1e-15);
}

TEST(AnnealingMpo, PreconditionErrors) {
  std::mt19937_64 rng(8);
  const auto ising = qt::random_ising(3, rng);
  EXPECT_THROW(annealing_mpo(ising, -0.1), InvalidArgument);
  EXPECT_THROW(annealing_mpo(ising, 1.1), InvalidArgument);
  EXPECT_THROW(annealing_mpo(IsingModel{}, 0.5), InvalidArgument);
  EXPECT_THROW(annealing_tables(qt::random_ising(1, rng), 0.5), InvalidArgument);
}

TEST(TablesFromJson, NamesMatricesAndCoefficients) {
  const auto j = nlohmann::json::parse(R"({"sites": [
    {"left_dim": 1, "right_dim": 2, "rules": [
      {"left": 1, "right": 1, "op": "Z"},
      {"left": 1, "right": 2, "op": [[0, 1], [1, 0]], "coeff": [0, 1]}]},
    {"left_dim": 2, "right_dim": 1, "rules": [
      {"left": 1, "right": 1, "op": "I", "coeff": 2},
      {"left": -1, "right": -1, "op": "X"}]}]})");
  const auto d = mpo_to_dense(mpo_from_tables(tables_from_json(j)));
  const Eigen::MatrixXcd ref = 2.0 * qt::embed(qt::pauli_z(), 0, 2) +
                               cplx(0, 1) * qt::embed(qt::pauli_x(), 0, 2) * qt::embed(qt::pauli_x(), 1, 2);
  EXPECT_LE((d - ref).norm(), 1e-15);
}

TEST(TablesFromJson, CustomAlphabet) {
  OperatorAlphabet a;
  Eigen::Matrix2cd n1;
  n1 << 0, 0, 0, 1;
  a.define("N", n1);
  const auto j = nlohmann::json::parse(R"({"sites": [{"left_dim": 1, "right_dim": 1, "rules": [{"left": 1, "right": 1, "op": "N"}]}]})");
  EXPECT_LE((mpo_to_dense(mpo_from_tables(tables_from_json(j, a))) - Eigen::MatrixXcd(n1)).norm(), 0.0);
}

TEST(TablesFromJson, ErrorsNameTheField) {
  auto expect_field = [](const char* doc, const std::string& field) {
    try {
      tables_from_json(nlohmann::json::parse(doc));
      ADD_FAILURE() << "no error for " << doc;
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
    }
  };
  expect_field(R"({})", "sites");
  expect_field(R"({"sites": [{"left_dim": "a", "right_dim": 1, "rules": []}]})", "left_dim");
  expect_field(R"({"sites": [{"left_dim": 1, "right_dim": 1, "rules": [{"left": 1, "right": 1}]}]})", "op");
  expect_field(R"({"sites": [{"left_dim": 1, "right_dim": 1, "rules": [{"left": 1, "right": 1, "op": "W"}]}]})", "op");
  expect_field(R"({"sites": [{"left_dim": 1, "right_dim": 1, "rules": [{"left": 1, "right": 1, "op": "Z", "coeff": "x"}]}]})",
               "coeff");
  expect_field(R"({"sites": [{"left_dim": 1, "right_dim": 1, "rules": [{"left": 1, "right": 1, "op": [[1, 0]]}]}]})", "op");
}
