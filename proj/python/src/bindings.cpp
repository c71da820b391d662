#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "idsq/anf.hpp"
#include "idsq/attack.hpp"
#include "idsq/division.hpp"
#include "idsq/lab.hpp"
#include "idsq/search.hpp"
#include "idsq/skinny.hpp"

namespace py = pybind11;
using namespace idsq;

namespace {

InputStructure make_input(const CipherParams& params, const std::optional<std::string>& active,
                          const std::vector<int>& cells) {
  if (active) return InputStructure::from_hex(params, *active);
  return InputStructure::from_cells(params, cells);
}

py::dict verdict_dict(const SearchVerdict& v) {
  py::dict d;
  d["kind"] = to_string(v.kind);
  d["probability"] = v.probability;
  d["key_bits"] = v.key_bits;
  d["estimated"] = v.estimated;
  d["note"] = v.note;
  return d;
}

py::list results_list(const std::vector<SearchResult>& results) {
  py::list out;
  for (const auto& r : results) {
    auto d = verdict_dict(r.verdict);
    d["combination"] = r.combination.to_string();
    out.append(d);
  }
  return out;
}

std::vector<State> run_cipher(bool forward, const std::string& cipher, const std::string& key,
                              const std::string& text, std::optional<int> rounds) {
  const auto params = CipherParams::parse(cipher);
  const auto schedule = TweakeySchedule::from_hex(params, key);
  const auto state = State::from_hex(params.cell_bits(), text);
  const int r = rounds.value_or(params.full_rounds());
  return forward ? encrypt(params, schedule, state, 0, r) : decrypt(params, schedule, state, 0, r);
}

}  // namespace

PYBIND11_MODULE(_idsq, m) {
  m.doc() = "Integral distinguisher workbench for SKINNY";

  py::register_exception<ResourceExhausted>(m, "ResourceExhausted", PyExc_RuntimeError);

  m.def(
      "encrypt",
      [](const std::string& cipher, const std::string& key, const std::string& plaintext,
         std::optional<int> rounds) {
        return run_cipher(true, cipher, key, plaintext, rounds).back().to_hex();
      },
      py::arg("cipher"), py::arg("key"), py::arg("plaintext"), py::arg("rounds") = py::none());
  m.def(
      "decrypt",
      [](const std::string& cipher, const std::string& key, const std::string& ciphertext,
         std::optional<int> rounds) {
        return run_cipher(false, cipher, key, ciphertext, rounds).back().to_hex();
      },
      py::arg("cipher"), py::arg("key"), py::arg("ciphertext"), py::arg("rounds") = py::none());

  m.def(
      "backward_extend",
      [](const std::string& cipher, const std::string& comb, int p, int q) {
        const auto params = CipherParams::parse(cipher);
        py::gil_scoped_release release;
        return to_string(backward_extend(CiphertextCombination::parse(params, comb), p, q));
      },
      py::arg("cipher"), py::arg("combination"), py::arg("p"), py::arg("q"),
      "Polynomial of the combination in the state at round p, as text.");

  m.def(
      "reachable",
      [](const std::string& cipher, const std::vector<int>& cells, int rounds, int bit) {
        const auto params = CipherParams::parse(cipher);
        const DivisionEngine engine(params);
        const auto input = InputStructure::from_cells(params, cells);
        return engine.reachable(input.d0(), rounds, StateMask::unit(static_cast<std::size_t>(bit)));
      },
      py::arg("cipher"), py::arg("cells"), py::arg("rounds"), py::arg("bit"),
      "Whether unit vector `bit` is covered by the division property after `rounds`.");

  m.def(
      "search",
      [](const std::string& cipher, const std::string& comb, int p, int q,
         const std::vector<int>& cells, std::optional<std::string> active) {
        const auto params = CipherParams::parse(cipher);
        const auto input = make_input(params, active, cells);
        const auto c = CiphertextCombination::parse(params, comb);
        SearchVerdict v;
        {
          py::gil_scoped_release release;
          v = DistinguisherSearch(params).check_balanced(c, p, q, input);
        }
        return verdict_dict(v);
      },
      py::arg("cipher"), py::arg("combination"), py::arg("p"), py::arg("q"),
      py::arg("cells") = std::vector<int>{15}, py::arg("active") = py::none());

  m.def(
      "search_prob",
      [](const std::string& cipher, const std::string& comb, int p, int q,
         const std::vector<int>& cells, std::optional<std::string> active) {
        const auto params = CipherParams::parse(cipher);
        const auto input = make_input(params, active, cells);
        const auto c = CiphertextCombination::parse(params, comb);
        SearchVerdict v;
        {
          py::gil_scoped_release release;
          v = DistinguisherSearch(params).key_dependent_probability(c, p, q, input);
        }
        return verdict_dict(v);
      },
      py::arg("cipher"), py::arg("combination"), py::arg("p"), py::arg("q"),
      py::arg("cells") = std::vector<int>{15}, py::arg("active") = py::none());

  m.def(
      "enum_linear",
      [](const std::string& cipher, int p, int q, const std::vector<int>& cells, unsigned jobs) {
        const auto params = CipherParams::parse(cipher);
        const auto input = InputStructure::from_cells(params, cells);
        std::vector<SearchResult> results;
        {
          py::gil_scoped_release release;
          SearchOptions options;
          options.jobs = jobs;
          results = DistinguisherSearch(params, options).enumerate_column_linear(p, q, input);
        }
        return results_list(results);
      },
      py::arg("cipher"), py::arg("p"), py::arg("q"), py::arg("cells") = std::vector<int>{15},
      py::arg("jobs") = 1U);

  m.def(
      "enum_nonlinear",
      [](const std::string& cipher, int cell, int p, int q, const std::vector<int>& cells,
         unsigned jobs) {
        const auto params = CipherParams::parse(cipher);
        const auto input = InputStructure::from_cells(params, cells);
        std::vector<SearchResult> results;
        {
          py::gil_scoped_release release;
          SearchOptions options;
          options.jobs = jobs;
          results = DistinguisherSearch(params, options).enumerate_cell_nonlinear(cell, p, q, input);
        }
        return results_list(results);
      },
      py::arg("cipher"), py::arg("cell"), py::arg("p"), py::arg("q"),
      py::arg("cells") = std::vector<int>{15}, py::arg("jobs") = 1U);

  m.def(
      "verify",
      [](const std::string& cipher, const std::string& comb, int rounds,
         const std::vector<int>& cells, std::size_t trials, std::uint64_t seed,
         const std::vector<int>& zero_key_bits, unsigned jobs) {
        const auto params = CipherParams::parse(cipher);
        const auto input = InputStructure::from_cells(params, cells);
        const auto c = CiphertextCombination::parse(params, comb);
        BalanceEstimate est;
        {
          py::gil_scoped_release release;
          est = estimate_balance_probability(params, input.active(), rounds, c, trials, seed,
                                             zero_key_bits, jobs);
        }
        py::dict d;
        d["trials"] = est.trials;
        d["zero_parity"] = est.zero_parity;
        d["frequency"] = est.frequency();
        return d;
      },
      py::arg("cipher"), py::arg("combination"), py::arg("rounds"),
      py::arg("cells") = std::vector<int>{15}, py::arg("trials") = 1000, py::arg("seed") = 1,
      py::arg("zero_key_bits") = std::vector<int>{}, py::arg("jobs") = 1U,
      "Empirical fraction of random keys for which the combination sums to zero.");

  m.def(
      "generate_dataset",
      [](const std::string& cipher, int rounds, const std::vector<int>& active_cells,
         const std::string& urange, const std::vector<int>& cells, std::size_t count,
         std::uint64_t seed) {
        DatasetSpec spec;
        spec.params = CipherParams::parse(cipher);
        spec.rounds = rounds;
        spec.active = InputStructure::from_cells(spec.params, active_cells).active();
        spec.urange = parse_urange(urange);
        spec.cells = cells;
        spec.count = count;
        spec.seed = seed;
        std::ostringstream out;
        {
          py::gil_scoped_release release;
          generate_dataset(spec, out);
        }
        return out.str();
      },
      py::arg("cipher"), py::arg("rounds"), py::arg("active_cells"), py::arg("urange"),
      py::arg("cells"), py::arg("count"), py::arg("seed") = 1,
      "Dataset text: one header line followed by `count` labelled records.");

  m.def(
      "complexity",
      [](int cell_bits, int guessed_cells, int cost_cells, int total_rounds, int active_cells) {
        const auto c =
            idsq::complexity({cell_bits, guessed_cells, cost_cells, total_rounds, active_cells});
        return py::make_tuple(c.time_log2, c.data_log2);
      },
      py::arg("cell_bits"), py::arg("guessed_cells"), py::arg("cost_cells"),
      py::arg("total_rounds"), py::arg("active_cells") = 12,
      "(log2 time, log2 data) of the key-recovery cost model.");

  m.def("attack_table", [] {
    py::list out;
    for (const auto& r : table2_rows()) {
      py::dict d;
      d["cipher"] = r.cipher;
      d["rounds"] = r.rounds;
      d["configuration"] = r.configuration;
      d["time_log2"] = r.time_log2;
      d["data_log2"] = r.data_log2;
      d["key_space_log2"] = r.key_space_log2;
      d["source"] = r.source;
      out.append(d);
    }
    return out;
  });
}
