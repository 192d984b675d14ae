#ifndef NNEULER_FIXTURES_HPP
#define NNEULER_FIXTURES_HPP

#include "nneuler/config.hpp"

#include <string>
#include <vector>

namespace nneuler {

/// Reference experiment presets.
ExperimentSpec low_vol_bond_spec();   // CIR(0.5, 0.04, 0.3), bond T=2, face 1000, mu 0.8
ExperimentSpec high_vol_bond_spec();  // CIR(0.5, 0.04, 1), bond T=2, face 1000, mu 0.28
ExperimentSpec heston_call_spec();    // Heston call T=5, K=100, mu1 0.657, mu3 1

/// One block of a table: a model/payoff with its rows (n, N) and scheme
/// columns.
struct TablePanel {
  std::string label;
  ExperimentSpec spec;
  std::vector<int> ns;
  std::vector<std::int64_t> paths;  // one per row
  std::vector<SchemeKind> schemes;
};

struct TableFixture {
  std::string name;
  std::string title;
  bool n_by_paths = false;  // rows pair n with a growing N (tables 3 and 5)
  std::vector<TablePanel> panels;
};

std::vector<std::string> fixture_names();

/// Throws ConfigError for an unknown name.
TableFixture table_fixture(const std::string& name);

/// Engine sweep for a panel with every N divided by `scale` (rounded, at
/// least 2); n is never scaled.
TableSpec panel_table_spec(const TablePanel& panel, std::uint64_t seed,
                           double scale, int threads);

}  // namespace nneuler

#endif  // NNEULER_FIXTURES_HPP
