#pragma once

#include <optional>
#include <string>
#include <vector>

namespace idsq {

/// Key-recovery cost model: guess g cells of key, partially encrypt or
/// decrypt `cost_cells` cells per text out of 16·R cell-rounds of a full
/// encryption, with structures of 2^{a·c} texts.
struct AttackParams {
  int cell_bits = 4;
  int guessed_cells = 0;
  int cost_cells = 0;
  int total_rounds = 0;
  int active_cells = 12;
};

struct Complexity {
  double time_log2;
  double data_log2;
};

/// time = 2^c · 2^{g·c} · cost / (16·R), data = 2^{a·c}.
Complexity complexity(const AttackParams& p);

/// Earlier 4+6+4 attack: one full structure plus 2^{11c} extra work.
Complexity baseline_complexity(int cell_bits);

struct Table2Row {
  std::string cipher;
  int rounds;
  std::string configuration;  // backward + distinguisher + forward
  double time_log2;
  double data_log2;
  int key_space_log2;
  std::string source;
};

std::vector<Table2Row> table2_rows();

/// Formatted table; `cipher` restricts it to rows of one variant.
std::string table2_report(const std::optional<std::string>& cipher = std::nullopt);

}  // namespace idsq
