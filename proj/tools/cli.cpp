#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "idsq/attack.hpp"
#include "idsq/lab.hpp"
#include "idsq/parallel.hpp"
#include "idsq/search.hpp"

namespace idsq::cli {
namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string cipher = "skinny-64-64";
  std::optional<int> rounds, p, q;
  std::string active_cells;
  std::string active;
  std::string comb;
  std::uint64_t seed = 1;
  std::size_t trials = 1000;
  std::string output;
  unsigned jobs = 0;
  std::string zero_key_bits;
  int cell = -1;
  std::string urange = "full";
  std::string cells;
  std::size_t count = 0;
  std::string row;
  std::string key;
  std::string pt;
  bool decrypt = false;
  bool positive_only = false;
  std::size_t frontier_budget = std::size_t{1} << 24;
  std::size_t monomial_budget = kDefaultMonomialBudget;
};

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw UsageError(std::string("bad ") + what + " entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

class Runner {
 public:
  Runner(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  CipherParams params() const {
    try {
      return CipherParams::parse(cfg_.cipher);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  unsigned jobs() const { return cfg_.jobs ? cfg_.jobs : default_jobs(); }

  // (p, q) from --p/--q/--rounds; q defaults to 1.
  std::pair<int, int> split() const {
    const int q = cfg_.q.value_or(1);
    int p;
    if (cfg_.p) {
      p = *cfg_.p;
      if (cfg_.rounds && *cfg_.rounds != p + q)
        throw UsageError("--p + --q must equal --rounds");
    } else if (cfg_.rounds) {
      p = *cfg_.rounds - q;
    } else {
      throw UsageError("give --rounds or --p");
    }
    if (p < 0 || q < 1) throw UsageError("need p >= 0 and q >= 1");
    return {p, q};
  }

  int rounds() const {
    if (!cfg_.rounds) throw UsageError("--rounds is required");
    if (*cfg_.rounds < 0 || *cfg_.rounds > kMaxRounds) throw UsageError("--rounds out of range");
    return *cfg_.rounds;
  }

  InputStructure input(const CipherParams& params) const {
    if (!cfg_.active.empty() && !cfg_.active_cells.empty())
      throw UsageError("use either --active or --active-cells");
    if (!cfg_.active.empty()) return InputStructure::from_hex(params, cfg_.active);
    const auto cells = parse_int_list(cfg_.active_cells.empty() ? "15" : cfg_.active_cells,
                                      "--active-cells");
    return InputStructure::from_cells(params, cells);
  }

  CiphertextCombination comb(const CipherParams& params) const {
    if (cfg_.comb.empty()) throw UsageError("--comb is required");
    return CiphertextCombination::parse(params, cfg_.comb);
  }

  SearchOptions search_options() const {
    return {cfg_.monomial_budget, cfg_.frontier_budget, jobs()};
  }

  std::ostream& sink() {
    if (cfg_.output.empty()) return out_;
    file_.open(cfg_.output);
    if (!file_) throw std::runtime_error("cannot open " + cfg_.output);
    return file_;
  }

  int encrypt() {
    const auto params = this->params();
    if (cfg_.key.empty() || cfg_.pt.empty()) throw UsageError("--key and --pt are required");
    const auto key = TweakeySchedule::from_hex(params, cfg_.key);
    const auto text = State::from_hex(params.cell_bits(), cfg_.pt);
    const int r = cfg_.rounds.value_or(params.full_rounds());
    const auto states = cfg_.decrypt ? decrypt(params, key, text, 0, r) : idsq::encrypt(params, key, text, 0, r);
    out_ << states.back().to_hex() << '\n';
    return kOk;
  }

  int anf() {
    const auto params = this->params();
    const auto [p, q] = split();
    out_ << to_string(backward_extend(comb(params), p, q, cfg_.monomial_budget)) << '\n';
    return kOk;
  }

  int search(bool probabilistic) {
    const auto params = this->params();
    const auto [p, q] = split();
    const auto in = input(params);
    const auto c = comb(params);
    DistinguisherSearch s(params, search_options());
    const auto v = probabilistic ? s.key_dependent_probability(c, p, q, in)
                                 : s.check_balanced(c, p, q, in);
    out_ << to_string(v.kind);
    if (probabilistic) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " %.6g", v.probability);
      out_ << buf;
      for (int k : v.key_bits) out_ << " k" << k;
    }
    out_ << '\n';
    if (v.witness) out_ << "witness " << to_string(Polynomial::from_terms({*v.witness})) << '\n';
    if (!v.note.empty()) out_ << "note " << v.note << '\n';
    switch (v.kind) {
      case VerdictKind::Balanced:
      case VerdictKind::Probabilistic: return kOk;
      case VerdictKind::Unknown: return kNegative;
      case VerdictKind::Inconclusive: return kExhausted;
    }
    return kOk;
  }

  int enumerate(bool nonlinear) {
    const auto params = this->params();
    const auto [p, q] = split();
    const auto in = input(params);
    if (nonlinear && cfg_.cell < 0) throw UsageError("--cell is required");
    DistinguisherSearch s(params, search_options());
    const auto results = nonlinear ? s.enumerate_cell_nonlinear(cfg_.cell, p, q, in)
                                   : s.enumerate_column_linear(p, q, in);
    auto& os = sink();
    os << report_header() << '\n';
    bool exhausted = false;
    for (const auto& r : results) {
      exhausted |= r.verdict.kind == VerdictKind::Inconclusive;
      if (cfg_.positive_only && r.verdict.probability <= 0) continue;
      os << report_line(r.combination, p, q, in, r.verdict) << '\n';
    }
    os.flush();
    return exhausted ? kExhausted : kOk;
  }

  int verify() {
    const auto params = this->params();
    const int r = rounds();
    const auto in = input(params);
    const auto c = comb(params);
    if (cfg_.trials < 1) throw UsageError("--trials must be positive");
    const auto zero = parse_int_list(cfg_.zero_key_bits, "--zero-key-bits");
    const auto est = estimate_balance_probability(params, in.active(), r, c, cfg_.trials, cfg_.seed,
                                                  zero, jobs());
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", est.frequency());
    out_ << "combination " << c.to_string() << " rounds " << r << " active " << in.to_hex() << '\n'
         << "trials " << est.trials << " zero_parity " << est.zero_parity << " frequency " << buf
         << '\n';
    return est.zero_parity == est.trials ? kOk : kNegative;
  }

  int gen_data() {
    DatasetSpec spec;
    spec.params = params();
    spec.rounds = rounds();
    spec.active = input(spec.params).active();
    try {
      spec.urange = parse_urange(cfg_.urange);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    spec.cells = cfg_.cells.empty() ? std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15}
                                    : parse_int_list(cfg_.cells, "--cells");
    if (cfg_.count < 1) throw UsageError("--count must be positive");
    spec.count = cfg_.count;
    spec.seed = cfg_.seed;
    generate_dataset(spec, sink(), jobs());
    return kOk;
  }

  int complexity() {
    out_ << table2_report(cfg_.row.empty() ? std::nullopt : std::optional<std::string>(cfg_.row));
    return kOk;
  }

  int sbox_tables() {
    const auto params = this->params();
    DivisionEngine engine(params);
    out_ << engine.sbox_table().dump();
    return kOk;
  }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
  std::ofstream file_;
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Integral distinguisher workbench for SKINNY", "idsq"};
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--cipher", cfg.cipher, "Variant skinny-<n>-<t>")->capture_default_str();
  app.add_option("--rounds", cfg.rounds, "Total rounds r (= p + q for searches)");
  app.add_option("--p", cfg.p, "Rounds covered by division propagation");
  app.add_option("--q", cfg.q, "Rounds covered by backward extension (default 1)");
  app.add_option("--active-cells", cfg.active_cells, "Comma list of fully active plaintext cells (default 15)");
  app.add_option("--active", cfg.active, "Active plaintext bits as a hex mask");
  app.add_option("--comb", cfg.comb, "Ciphertext combination, e.g. b24^b26^b24*b27");
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--trials", cfg.trials, "Random keys for verify")->capture_default_str();
  app.add_option("--output", cfg.output, "Write reports or datasets to this file");
  app.add_option("--jobs", cfg.jobs, "Worker threads (default: IDSQ_JOBS or all cores)");
  app.add_option("--zero-key-bits", cfg.zero_key_bits, "Comma list of master-key bits forced to 0 in verify");
  app.add_option("--cell", cfg.cell, "Ciphertext cell for enum-nonlinear");
  app.add_option("--urange", cfg.urange, "Dataset u-range: full or unit")->capture_default_str();
  app.add_option("--cells", cfg.cells, "Comma list of observed cells for gen-data (default all)");
  app.add_option("--count", cfg.count, "Number of dataset records");
  app.add_option("--row", cfg.row, "Restrict complexity to one variant");
  app.add_option("--key", cfg.key, "Master tweakey in hex (TK1 first) for encrypt");
  app.add_option("--pt", cfg.pt, "Input block in hex for encrypt");
  app.add_flag("--decrypt", cfg.decrypt, "Decrypt instead of encrypt");
  app.add_flag("--positive", cfg.positive_only, "enum-nonlinear: print only nonzero probabilities");
  app.add_option("--frontier-budget", cfg.frontier_budget, "Division frontier size limit")->capture_default_str();
  app.add_option("--monomial-budget", cfg.monomial_budget, "Backward extension size limit")->capture_default_str();

  auto* encrypt = app.add_subcommand("encrypt", "Encrypt (or decrypt) one block");
  auto* anf = app.add_subcommand("anf", "Print the backward-extended ANF of --comb");
  auto* search = app.add_subcommand("search", "Key-independent balance check");
  auto* search_prob = app.add_subcommand("search-prob", "Key-dependent balance probability");
  auto* enum_linear = app.add_subcommand("enum-linear", "Check all column-aligned linear combinations");
  auto* enum_nonlinear = app.add_subcommand("enum-nonlinear", "Check every Boolean function of one 4-bit cell");
  auto* verify = app.add_subcommand("verify", "Empirical parity over random keys");
  auto* gen_data = app.add_subcommand("gen-data", "Emit a division-sequence dataset");
  auto* complexity = app.add_subcommand("complexity", "Attack complexity table");
  auto* sbox_tables = app.add_subcommand("sbox-tables", "Dump the S-box division trail table");
  app.footer("Exit status: 0 ok, 1 negative verdict or counterexample, 2 usage error, 3 budget exhausted.");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  Runner run(cfg, out);
  try {
    if (*encrypt) return run.encrypt();
    if (*anf) return run.anf();
    if (*search) return run.search(false);
    if (*search_prob) return run.search(true);
    if (*enum_linear) return run.enumerate(false);
    if (*enum_nonlinear) return run.enumerate(true);
    if (*verify) return run.verify();
    if (*gen_data) return run.gen_data();
    if (*complexity) return run.complexity();
    if (*sbox_tables) return run.sbox_tables();
  } catch (const ResourceExhausted& e) {
    err << "error: " << e.what() << '\n';
    return kExhausted;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace idsq::cli
