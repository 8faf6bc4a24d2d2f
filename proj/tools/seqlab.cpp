#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqlab/constructions.hpp"
#include "seqlab/errors.hpp"
#include "seqlab/json_io.hpp"
#include "seqlab/operator_checks.hpp"
#include "seqlab/verify.hpp"
#include "seqlab/window.hpp"

namespace {

using nlohmann::json;
using namespace seqlab;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream file(path);
  if (!file) {
    throw SchemaError("cannot open file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw SchemaError("input is not valid JSON (" + what + ")");
  }
  return j;
}

SeqPtr load_sequence(const std::string& path) {
  return seq_from_json(parse_json(read_input(path), "sequence from " + path));
}

OpPtr load_operator(const std::string& path) {
  return op_from_json(parse_json(read_input(path), "operator from " + path));
}

std::vector<Index> parse_index_list(const std::string& csv) {
  std::vector<Index> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(parse_integer(item));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("bad index '") + item + "': " + e.what());
    }
  }
  if (out.empty()) throw SchemaError("empty index list");
  return out;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int run_gen(const std::string& name, unsigned long j, unsigned long nmax,
            long blocks, unsigned long n, long k, bool deep) {
  SeqPtr seq;
  if (name == "alternating") {
    seq = alternating();
  } else if (name == "char-multiples") {
    seq = char_multiples(j);
  } else if (name == "thm41") {
    seq = blocks > 0 ? geometric_blocks_truncation(
                           static_cast<unsigned long>(blocks))
                     : geometric_blocks();
  } else if (name == "thm21") {
    seq = witness_sequence(nmax, deep);
  } else if (name == "j-set") {
    if (k > 0) {
      std::vector<IntInterval> points;
      for (Index& p : j_nk(n, static_cast<unsigned long>(k))) {
        points.push_back(IntInterval{p, p + 1});
      }
      seq = SequenceExpr::indicator(std::move(points));
    } else {
      seq = SequenceExpr::indicator({j_set(n)});
    }
  } else if (name == "i-set") {
    seq = SequenceExpr::indicator(i_set(n));
  } else {
    throw CLI::ValidationError("gen", "unknown generator '" + name + "'");
  }
  emit(seq_to_json(seq));
  return 0;
}

int run_verify(const std::string& claim, bool as_json, bool as_csv,
               bool parallel, const std::string& overrides_text) {
  std::vector<VerificationReport> reports;
  if (!claim.empty()) {
    json overrides = json::object();
    if (!overrides_text.empty()) {
      overrides = parse_json(overrides_text, "overrides");
    }
    reports.push_back(run_claim(claim, overrides));
  } else {
    reports = run_all(parallel);
  }
  bool all_pass = true;
  for (const auto& r : reports) all_pass = all_pass && r.pass;

  if (as_json) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    emit(arr);
  } else if (as_csv) {
    std::cout << kCsvHeader << "\nclaimId,pass,elapsedMillis\n";
    for (const auto& r : reports) {
      std::cout << r.claim_id << ',' << (r.pass ? "true" : "false") << ','
                << r.elapsed_millis << "\n";
    }
  } else {
    for (const auto& r : reports) {
      std::cout << r.claim_id << ' ' << (r.pass ? "PASS" : "FAIL") << " ("
                << r.elapsed_millis << " ms)\n";
      if (!r.pass) {
        std::cout << "  witnesses: " << r.witnesses.dump() << "\n";
      }
    }
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* cap = std::getenv("SEQLAB_HORIZON_CAP")) {
    try {
      set_horizon_cap(std::stoull(cap));
    } catch (const std::exception&) {
      std::cerr << "seqlab: SEQLAB_HORIZON_CAP is not a number: " << cap
                << "\n";
      return 2;
    }
  }

  CLI::App app{"exact experiments on bounded sequences: value bounds, "
               "uniform averages, dilation operators and claim verification"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "emit a generator sequence as JSON");
  std::string gen_name;
  unsigned long gen_j = 2, gen_nmax = 5, gen_n = 1;
  long gen_blocks = 0, gen_k = 0;
  gen->add_option("name", gen_name,
                  "one of: alternating, char-multiples, thm41, thm21, j-set, "
                  "i-set")
      ->required();
  gen->add_option("--j", gen_j, "multiple for char-multiples");
  gen->add_option("--nmax", gen_nmax, "depth for thm21");
  gen->add_option("--blocks", gen_blocks, "materialized blocks for thm41");
  gen->add_option("--n", gen_n, "level for j-set/i-set");
  gen->add_option("--k", gen_k, "dilation index for j-set");
  bool gen_deep = false;
  gen->add_flag("--deep", gen_deep, "allow thm21 depths beyond the guard");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a sequence at indices");
  std::string eval_seq, eval_at;
  eval_cmd->add_option("--seq", eval_seq, "sequence JSON file or -")->required();
  eval_cmd->add_option("--at", eval_at, "comma-separated indices")->required();

  // apply
  auto* apply_cmd =
      app.add_subcommand("apply", "apply an operator, emit the composed JSON");
  std::string apply_op, apply_seq;
  apply_cmd->add_option("--op", apply_op, "operator JSON file or -")->required();
  apply_cmd->add_option("--seq", apply_seq, "sequence JSON file or -")
      ->required();

  // bounds
  auto* bounds_cmd =
      app.add_subcommand("bounds", "certified enclosure of the value interval");
  std::string bounds_seq;
  unsigned long bounds_nmax = 8;
  std::string bounds_scan;
  bool bounds_json = false, bounds_csv = false;
  bounds_cmd->add_option("--seq", bounds_seq, "sequence JSON file or -")
      ->required();
  bounds_cmd->add_option("--nmax", bounds_nmax, "deepest window length");
  bounds_cmd->add_option("--scan", bounds_scan,
                         "scan horizon for sequences without exact extrema");
  bounds_cmd->add_flag("--json", bounds_json, "full enclosure as JSON");
  bounds_cmd->add_flag("--csv", bounds_csv, "per-n table as CSV");

  // lorentz
  auto* lorentz_cmd =
      app.add_subcommand("lorentz", "uniform-average convergence analysis");
  std::string lorentz_seq, lorentz_tol = "1/100", lorentz_scan;
  unsigned long lorentz_nmax = 64;
  bool lorentz_json = false, lorentz_as_csv = false;
  lorentz_cmd->add_option("--seq", lorentz_seq, "sequence JSON file or -")
      ->required();
  lorentz_cmd->add_option("--nmax", lorentz_nmax, "deepest window length");
  lorentz_cmd->add_option("--tol", lorentz_tol, "decay threshold, p/q");
  lorentz_cmd->add_option("--scan", lorentz_scan, "scan horizon");
  lorentz_cmd->add_flag("--json", lorentz_json, "full report as JSON");
  lorentz_cmd->add_flag("--csv", lorentz_as_csv, "gap table as CSV");

  // cesaro
  auto* cesaro_cmd =
      app.add_subcommand("cesaro", "exact running averages at indices");
  std::string cesaro_seq, cesaro_at;
  cesaro_cmd->add_option("--seq", cesaro_seq, "sequence JSON file or -")
      ->required();
  cesaro_cmd->add_option("--at", cesaro_at, "comma-separated indices")
      ->required();

  // zeta
  auto* zeta_cmd = app.add_subcommand("zeta", "weighted geometric averages");
  std::string zeta_seq, zeta_n;
  double zeta_eps = 1e-8;
  bool zeta_json = false;
  zeta_cmd->add_option("--seq", zeta_seq, "sequence JSON file or -")->required();
  zeta_cmd->add_option("--n", zeta_n, "comma-separated scale parameters")
      ->required();
  zeta_cmd->add_option("--eps", zeta_eps, "truncation target");
  zeta_cmd->add_flag("--json", zeta_json, "rows as JSON");

  // witness
  auto* witness_cmd = app.add_subcommand(
      "witness", "max of A(x + (I-T)y) over a finite index region");
  std::string witness_x, witness_op, witness_y, witness_region;
  bool witness_json = false;
  witness_cmd->add_option("--x", witness_x, "sequence JSON file or -")
      ->required();
  witness_cmd->add_option("--op", witness_op, "operator JSON file or -")
      ->required();
  witness_cmd->add_option("--y", witness_y, "sequence JSON file or -")
      ->required();
  witness_cmd->add_option("--region", witness_region, "lo,hi (half-open)")
      ->required();
  witness_cmd->add_flag("--json", witness_json, "result as JSON");

  // verify
  auto* verify_cmd =
      app.add_subcommand("verify", "run the claims registry, exit 0 iff pass");
  std::string verify_claim, verify_overrides;
  bool verify_json = false, verify_csv = false, verify_parallel = false;
  verify_cmd->add_option("--claim", verify_claim, "run a single claim by id");
  verify_cmd->add_option("--overrides", verify_overrides,
                         "JSON object of parameter overrides (with --claim)");
  verify_cmd->add_flag("--json", verify_json, "full reports as JSON");
  verify_cmd->add_flag("--csv", verify_csv, "summary as CSV");
  verify_cmd->add_flag("--parallel", verify_parallel, "run claims in parallel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      return run_gen(gen_name, gen_j, gen_nmax, gen_blocks, gen_n, gen_k,
                     gen_deep);
    }
    if (eval_cmd->parsed()) {
      const SeqPtr seq = load_sequence(eval_seq);
      for (const Index& k : parse_index_list(eval_at)) {
        std::cout << to_string(eval(*seq, k)) << "\n";
      }
      return 0;
    }
    if (apply_cmd->parsed()) {
      emit(seq_to_json(apply(load_operator(apply_op), load_sequence(apply_seq))));
      return 0;
    }
    if (bounds_cmd->parsed()) {
      const SeqPtr seq = load_sequence(bounds_seq);
      const Index scan = bounds_scan.empty() ? Index(kDefaultScanHorizon)
                                             : parse_integer(bounds_scan);
      const BoundsEnclosure enclosure = sucheston_bounds(seq, bounds_nmax, scan);
      if (bounds_json) {
        emit(to_json(enclosure));
      } else if (bounds_csv) {
        std::cout << enclosure_csv(enclosure);
      } else {
        std::cout << '[' << to_string(enclosure.q_lower) << ", "
                  << to_string(enclosure.p_upper) << "]\n";
      }
      return 0;
    }
    if (lorentz_cmd->parsed()) {
      const SeqPtr seq = load_sequence(lorentz_seq);
      const Index scan = lorentz_scan.empty() ? Index(kDefaultScanHorizon)
                                              : parse_integer(lorentz_scan);
      const LorentzReport report =
          lorentz_check(seq, lorentz_nmax, parse_rational(lorentz_tol), scan);
      if (lorentz_json) {
        emit(to_json(report));
      } else if (lorentz_as_csv) {
        std::cout << lorentz_csv(report);
      } else {
        switch (report.verdict.kind) {
          case LorentzVerdictKind::almost_convergent:
            std::cout << "almost_convergent value="
                      << to_string(report.verdict.value) << "\n";
            break;
          case LorentzVerdictKind::not_almost_convergent:
            std::cout << "not_almost_convergent gapLower="
                      << to_string(report.verdict.gap_lower) << "\n";
            break;
          case LorentzVerdictKind::inconclusive:
            std::cout << "inconclusive D(" << report.table.back().n
                      << ")=" << to_string(report.table.back().gap) << "\n";
            break;
        }
      }
      return 0;
    }
    if (cesaro_cmd->parsed()) {
      const SeqPtr seq = load_sequence(cesaro_seq);
      for (const auto& [j, value] :
           cesaro_profile(seq, parse_index_list(cesaro_at))) {
        std::cout << to_string(value) << "\n";
      }
      return 0;
    }
    if (zeta_cmd->parsed()) {
      const SeqPtr seq = load_sequence(zeta_seq);
      json rows = json::array();
      if (!zeta_json) {
        std::cout << kCsvHeader << "\nn,value,truncationBound,termsUsed\n";
      }
      for (const Index& n : parse_index_list(zeta_n)) {
        if (n < 1 || n > 100'000'000) {
          throw SchemaError("zeta scale n out of range");
        }
        const ZetaValue z =
            zeta_transform(seq, n.convert_to<unsigned long>(), zeta_eps);
        if (zeta_json) {
          rows.push_back(to_json(z));
        } else {
          std::cout << z.n << ',' << z.value << ',' << z.truncation_bound << ','
                    << z.terms_used << "\n";
        }
      }
      if (zeta_json) emit(rows);
      return 0;
    }
    if (witness_cmd->parsed()) {
      const std::vector<Index> edges = parse_index_list(witness_region);
      if (edges.size() != 2) {
        throw SchemaError("--region must be lo,hi");
      }
      const WitnessResult result = dilation_witness_check(
          load_sequence(witness_x), load_operator(witness_op),
          load_sequence(witness_y), IntInterval{edges[0], edges[1]});
      if (witness_json) {
        emit(json{{"maxValue", to_string(result.max_value)},
                  {"witness", to_string(result.witness)}});
      } else {
        std::cout << "max=" << to_string(result.max_value)
                  << " witness=" << to_string(result.witness) << "\n";
      }
      return 0;
    }
    if (verify_cmd->parsed()) {
      return run_verify(verify_claim, verify_json, verify_csv, verify_parallel,
                        verify_overrides);
    }
  } catch (const SchemaError& e) {
    std::cerr << "seqlab: " << e.what() << "\n";
    return 3;
  } catch (const GuardError& e) {
    std::cerr << "seqlab: " << e.what() << "\n";
    return 4;
  } catch (const UnsupportedOperatorError& e) {
    std::cerr << "seqlab: " << e.what() << "\n";
    return 3;
  } catch (const ClaimError& e) {
    std::cerr << "seqlab: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "seqlab: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "seqlab: internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
