// qcorr: measures, sweeps, bounds, capacity, recovery and fuzzing for
// multipartite density operators.
//
// Exit codes: 0 success, 1 property violation, 2 input error.

#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "qcorr/bounds.hpp"
#include "qcorr/channel.hpp"
#include "qcorr/extension.hpp"
#include "qcorr/fuzz.hpp"
#include "qcorr/io.hpp"
#include "qcorr/parallel.hpp"
#include "qcorr/recovery.hpp"

using namespace qcorr;

namespace {

std::vector<std::string> split_labels(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Partition split_partition(const std::string& spec) {
  Partition cells;
  for (const auto& cell : split_labels(spec)) {
    LabelSet labels;
    std::string cur;
    for (char c : cell) {
      if (c == '+') {
        if (!cur.empty()) labels.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) labels.push_back(cur);
    cells.push_back(labels);
  }
  return cells;
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text(out_path, text);
}

struct GlobalConfig {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string config_path;
  bool bits = false;
};

// Config precedence: CLI flags > config file > defaults. The config file
// uses the flat TOML subset.
void load_config(GlobalConfig& g, CLI::App& app) {
  if (g.config_path.empty()) return;
  const json cfg = parse_toml_subset(read_text(g.config_path));
  if (cfg.contains("seed") && app.count("--seed") == 0)
    g.seed = cfg["seed"].get<std::uint64_t>();
  if (cfg.contains("threads") && app.count("--threads") == 0)
    g.threads = cfg["threads"].get<int>();
  auto& t = tols();
  if (cfg.contains("tolerances.num")) t.num = cfg["tolerances.num"];
  if (cfg.contains("tolerances.agree")) t.agree = cfg["tolerances.agree"];
  if (cfg.contains("tolerances.conv")) t.conv = cfg["tolerances.conv"];
  if (cfg.contains("tolerances.fr")) t.fr = cfg["tolerances.fr"];
  if (cfg.contains("tolerances.bound")) t.bound = cfg["tolerances.bound"];
}

double to_output_units(double nats, bool bits) {
  return bits ? nats / std::log(2.0) : nats;
}

int run_measure(const GlobalConfig& g, const std::string& state_path,
                const std::string& measure, const std::string& partition,
                const std::string& b_csv, const std::string& formula,
                const std::string& out_path) {
  const auto s = read_state(state_path);
  const Partition cells = split_partition(partition);
  const LabelSet b = split_labels(b_csv);

  MeasureValue value;
  json bounds = json::object();
  if (measure == "entropy") {
    value = {combo_value(s, {{1.0, cells.at(0)}}), "extended-entropy"};
  } else if (measure == "mi") {
    value = mutual_information(s, cells);
    bounds["mi"] = measure_upper_bound(
        s, cells.size() == 2 ? MeasureBound::mi_bipartite
                             : MeasureBound::mi_multipartite,
        cells);
  } else if (measure == "cmi") {
    CmiFormula f = CmiFormula::direct;
    if (formula == "via_ab") f = CmiFormula::via_ab;
    else if (formula == "via_cb") f = CmiFormula::via_cb;
    else if (formula == "four_mi") f = CmiFormula::four_mi;
    else if (formula == "purified") f = CmiFormula::purified;
    else if (!formula.empty() && formula != "direct")
      throw layout_error("unknown cmi formula: " + formula);
    if (cells.size() == 2) {
      value = cmi(s, cells[0], cells[1], b, f);
      bounds["cmi"] =
          measure_upper_bound(s, MeasureBound::cmi_tripartite, cells, b);
    } else {
      value = cmi_multipartite(s, cells, b);
      bounds["cmi"] =
          measure_upper_bound(s, MeasureBound::cmi_multipartite, cells, b);
    }
  } else if (measure == "cond-entropy") {
    value = {conditional_entropy_ext(s, cells.at(0), b), "extended"};
  } else if (measure == "secrecy") {
    value = secrecy_monotone(s, cells, b);
    bounds["secrecy"] = measure_upper_bound(s, MeasureBound::secrecy, cells);
  } else if (measure == "interaction") {
    value = interaction_information(s, cells);
    bounds["interaction"] =
        measure_upper_bound(s, MeasureBound::interaction, cells);
  } else if (measure == "info-gap") {
    if (cells.size() % 2 != 0)
      throw layout_error("info-gap needs unprimed+primed cells");
    Partition unprimed(cells.begin(), cells.begin() + cells.size() / 2);
    Partition primed(cells.begin() + cells.size() / 2, cells.end());
    value = information_gap(s, unprimed, primed);
    bounds["info_gap"] =
        measure_upper_bound(s, MeasureBound::info_gap, unprimed);
  } else {
    throw layout_error("unknown measure: " + measure);
  }

  json rec = measure_record(measure, partition, value, bounds);
  if (g.bits && !value.is_infinite())
    rec["value_bits"] = value.value / std::log(2.0);
  emit(rec, out_path);
  std::cout << measure << " [" << partition << "] = "
            << (value.is_infinite()
                    ? std::string("inf")
                    : format_double(to_output_units(value.value, g.bits)))
            << (g.bits ? " bits" : " nats") << "\n";
  return 0;
}

TruncationScheme scheme_from_config(const json& cfg,
                                    const MultipartiteState& s) {
  TruncationScheme scheme;
  for (const auto& label : s.layout().labels()) {
    const std::string key = "scheme." + label;
    if (!cfg.contains(key + ".ranks")) continue;
    LabelScheme ls;
    for (const auto& r : cfg[key + ".ranks"]) ls.ranks.push_back(r.get<int>());
    std::string kind = cfg.value(key + ".kind", std::string("spectral"));
    if (kind == "spectral") ls.kind = SchemeKind::spectral;
    else if (kind == "basis") ls.kind = SchemeKind::basis;
    else if (kind == "random") ls.kind = SchemeKind::random_subspace;
    else throw layout_error("unknown scheme kind: " + kind);
    if (cfg.contains(key + ".seed"))
      ls.seed = cfg[key + ".seed"].get<std::uint64_t>();
    scheme.per_label[label] = ls;
  }
  if (scheme.per_label.empty())
    throw layout_error("scheme config has no scheme.<label>.ranks entries");
  return scheme;
}

int run_sweep(const GlobalConfig& g, const std::string& state_path,
              const std::string& scheme_path, const std::string& measure,
              const std::string& partition, const std::string& b_csv,
              const std::string& csv_path, const std::string& out_path) {
  const auto s = read_state(state_path);
  json cfg;
  if (scheme_path.size() > 5 &&
      scheme_path.substr(scheme_path.size() - 5) == ".json")
    cfg = json::parse(read_text(scheme_path));
  else
    cfg = parse_toml_subset(read_text(scheme_path));
  const auto scheme = scheme_from_config(cfg, s);

  MeasureFn fn;
  const Partition cells = split_partition(partition);
  const LabelSet b = split_labels(b_csv);
  if (measure == "entropy") {
    fn = [cells](const MultipartiteState& x) {
      return marginal_entropy(x, cells.at(0));
    };
  } else if (measure == "mi") {
    fn = [cells](const MultipartiteState& x) {
      return mutual_information(x, cells).value;
    };
  } else if (measure == "cmi") {
    fn = [cells, b](const MultipartiteState& x) {
      return cmi(x, cells.at(0), cells.at(1), b).value;
    };
  } else {
    throw layout_error("sweep measure must be entropy|mi|cmi");
  }

  const auto sweep = faithfulness_sweep(s, fn, scheme, g.threads);

  std::vector<std::string> header;
  for (const auto& [label, ls] : scheme.per_label)
    header.push_back("rank_" + label);
  header.push_back("lambda");
  header.push_back("value");
  CsvWriter csv(header);
  for (const auto& pt : sweep.points) {
    std::vector<std::string> row;
    for (const auto& [label, ls] : scheme.per_label)
      row.push_back(std::to_string(pt.ranks.at(label)));
    row.push_back(format_double(pt.lambda));
    row.push_back(format_double(pt.value));
    csv.row(row);
  }
  if (!csv_path.empty()) csv.save(csv_path);
  else std::cout << csv.str();

  json summary = {{"reference", sweep.reference},
                  {"final_gap", sweep.final_gap},
                  {"converged", sweep.converged},
                  {"points", sweep.points.size()}};
  emit(summary, out_path);
  std::cout << "sweep " << measure << ": final_gap="
            << format_double(sweep.final_gap)
            << (sweep.converged ? " converged" : " NOT-CONVERGED") << "\n";
  return sweep.converged ? 0 : 1;
}

int run_bounds(const GlobalConfig& g, const std::string& kind_name, int d,
               int pairs, const std::string& csv_path) {
  static const std::pair<const char*, BoundKind> kinds[] = {
      {"entropy", BoundKind::entropy},
      {"cond-entropy", BoundKind::conditional_entropy},
      {"mi", BoundKind::mi},
      {"mi-multipartite", BoundKind::mi_multipartite},
      {"cmi", BoundKind::cmi},
      {"cmi-multipartite", BoundKind::cmi_multipartite},
      {"secrecy", BoundKind::secrecy},
      {"info-gap", BoundKind::info_gap},
      {"interaction", BoundKind::interaction},
  };
  std::vector<BoundKind> selected;
  if (kind_name == "all") {
    for (const auto& [n, k] : kinds) selected.push_back(k);
  } else {
    for (const auto& [n, k] : kinds)
      if (kind_name == n) selected.push_back(k);
    if (selected.empty())
      throw layout_error("unknown bound kind: " + kind_name);
  }

  CsvWriter csv({"kind", "seed", "epsilon", "delta_F", "bound", "ratio"});
  bool all_pass = true;
  for (const auto kind : selected) {
    const auto report =
        verify_bound_default(kind, d, pairs, g.seed, g.threads);
    for (const auto& row : report.rows)
      csv.row({bound_kind_name(kind), std::to_string(row.seed),
               format_double(row.epsilon), format_double(row.delta_f),
               format_double(row.bound), format_double(row.ratio)});
    all_pass = all_pass && report.pass;
    std::cout << "bounds " << bound_kind_name(kind) << " d=" << d
              << ": max_ratio=" << format_double(report.max_ratio)
              << (report.pass ? " PASS" : " FAIL") << "\n";
  }
  if (!csv_path.empty()) csv.save(csv_path);
  return all_pass ? 0 : 1;
}

int run_capacity(const GlobalConfig& g, const std::string& channel_path,
                 const std::string& f_path, double e, int restarts,
                 const std::string& out_path) {
  const auto ch = read_channel(channel_path);
  ConstraintSpec spec;
  if (f_path.empty()) {
    // Unconstrained: F = 0 with any E > 0 accepts every state.
    spec.F = Mat::Zero(ch.in_dim(), ch.in_dim());
    spec.E = std::max(e, 1.0);
  } else {
    const json j = json::parse(read_text(f_path));
    const long d = ch.in_dim();
    spec.F = Mat(d, d);
    long i = 0;
    for (const auto& cell : j.at("matrix")) {
      spec.F(i / d, i % d) = cxd(cell.at(0).get<double>(),
                                 cell.at(1).get<double>());
      ++i;
    }
    spec.E = e;
  }
  CapacityOpts opts;
  opts.restarts = restarts;
  opts.seed = g.seed;
  opts.threads = g.threads;
  const auto result = constrained_capacity(ch, spec, opts);
  json out = {{"value_nats", result.value},
              {"constraint_value", result.constraint_value},
              {"iterations", result.iterations},
              {"best_per_restart", result.best_per_restart}};
  emit(out, out_path);
  std::cout << "capacity = " << format_double(result.value) << " nats ("
            << restarts << " restarts)\n";
  return 0;
}

int run_recover(const GlobalConfig& g, const std::string& state_path,
                const std::string& labels_csv, int restarts,
                const std::string& out_path) {
  const auto s = read_state(state_path);
  const auto cells = split_partition(labels_csv);
  if (cells.size() != 3)
    throw layout_error("recover needs --labels A,B,C (three cells)");
  RecoveryOpts opts;
  opts.restarts = restarts;
  opts.seed = g.seed;
  opts.threads = g.threads;
  const auto report = recovery_search(s, cells[0], cells[1], cells[2], opts);
  emit(recovery_report_to_json(report), out_path);
  std::cout << "recover: cmi=" << format_double(report.cmi)
            << " fr_lhs=" << format_double(report.fr_lhs)
            << " fidelity=" << format_double(report.fidelity)
            << (report.pass ? " PASS" : " FAIL") << "\n";
  return report.pass ? 0 : 1;
}

int run_fuzz_cmd(const GlobalConfig& g, const std::string& props_csv,
                 int budget, const std::string& csv_path) {
  std::vector<std::string> names;
  if (!props_csv.empty() && props_csv != "all")
    names = split_labels(props_csv);
  const auto report = run_fuzz(names, budget, g.seed, g.threads);
  const std::string csv = fuzz_report_csv(report);
  if (!csv_path.empty()) write_text(csv_path, csv);
  for (const auto& r : report.results)
    std::cout << "fuzz " << r.name << ": " << r.samples - r.failures << "/"
              << r.samples << " pass, worst_margin="
              << format_double(r.worst_margin)
              << (r.failures ? " FAIL" : " PASS") << "\n";
  return report.all_pass ? 0 : 1;
}

int run_gen(const GlobalConfig& g, const std::string& kind,
            const std::string& dims_csv, int rank, double param, int cutoff,
            const std::string& out_path) {
  if (out_path.empty()) throw layout_error("gen requires --out");
  if (kind == "random-state") {
    SubsystemLayout layout;
    const auto dims = split_labels(dims_csv);
    int i = 0;
    for (const auto& d : dims)
      layout.push_back(std::string(1, char('A' + i++)), std::stoi(d));
    write_state(random_state(layout, rank > 0 ? rank
                                              : int(layout.total_dim()),
                             g.seed),
                out_path);
  } else if (kind == "random-channel") {
    const auto dims = split_labels(dims_csv);
    if (dims.size() != 2)
      throw layout_error("random-channel needs --dims d_in,d_out");
    const SubsystemLayout in{{"A", std::stoi(dims[0])}};
    const SubsystemLayout out{{"B", std::stoi(dims[1])}};
    write_channel(random_channel(in, out, std::max(rank, 1), g.seed),
                  out_path);
  } else if (kind == "tmsv") {
    write_state(model_tmsv(param, cutoff), out_path);
  } else if (kind == "thermal") {
    write_state(model_thermal(param, cutoff), out_path);
  } else if (kind == "bell") {
    Vec psi = Vec::Zero(4);
    psi[0] = psi[3] = 1.0 / std::sqrt(2.0);
    write_state(MultipartiteState::trusted(
                    psi * psi.adjoint(), SubsystemLayout{{"A", 2}, {"B", 2}}),
                out_path);
  } else if (kind == "ghz") {
    Vec psi = Vec::Zero(8);
    psi[0] = psi[7] = 1.0 / std::sqrt(2.0);
    write_state(MultipartiteState::trusted(
                    psi * psi.adjoint(),
                    SubsystemLayout{{"A", 2}, {"B", 2}, {"C", 2}}),
                out_path);
  } else {
    throw layout_error("unknown gen kind: " + kind);
  }
  std::cout << "gen " << kind << " -> " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum correlation measures on multipartite states"};
  app.require_subcommand(1);

  GlobalConfig g;
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--threads", g.threads,
                 "worker threads (default: QCORR_THREADS or 1)");
  app.add_option("--config", g.config_path, "TOML config file");
  app.add_flag("--bits", g.bits, "report values in bits at output");

  // measure
  auto* measure = app.add_subcommand("measure", "evaluate one measure");
  std::string m_state, m_name, m_partition, m_b, m_formula, m_out;
  measure->add_option("--state", m_state)->required();
  measure->add_option("--measure", m_name)->required();
  measure->add_option("--partition", m_partition,
                      "cells: comma-separated, labels joined by '+'")
      ->required();
  measure->add_option("--b-labels", m_b);
  measure->add_option("--formula", m_formula);
  measure->add_option("--out", m_out);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "truncation sweep");
  std::string s_state, s_scheme, s_measure = "mi", s_partition, s_b, s_csv,
              s_out;
  sweep->add_option("--state", s_state)->required();
  sweep->add_option("--scheme", s_scheme, "TOML/JSON scheme config")
      ->required();
  sweep->add_option("--measure", s_measure);
  sweep->add_option("--partition", s_partition)->required();
  sweep->add_option("--b-labels", s_b);
  sweep->add_option("--csv", s_csv);
  sweep->add_option("--out", s_out);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "verify continuity bounds");
  std::string b_kind = "all", b_csv_path;
  int b_d = 2, b_pairs = 100;
  bounds->add_option("--kind", b_kind);
  bounds->add_option("--dim", b_d);
  bounds->add_option("--pairs", b_pairs);
  bounds->add_option("--csv", b_csv_path);

  // capacity
  auto* capacity = app.add_subcommand("capacity", "constrained capacity");
  std::string c_channel, c_f, c_out;
  double c_e = 1.0;
  int c_restarts = 16;
  capacity->add_option("--channel", c_channel)->required();
  capacity->add_option("--constraint-F", c_f);
  capacity->add_option("--E", c_e);
  capacity->add_option("--restarts", c_restarts);
  capacity->add_option("--out", c_out);

  // recover
  auto* recover = app.add_subcommand("recover", "Fawzi-Renner recovery");
  std::string r_state, r_labels, r_out;
  int r_restarts = 4;
  recover->add_option("--state", r_state)->required();
  recover->add_option("--labels", r_labels, "A,B,C cells")->required();
  recover->add_option("--restarts", r_restarts);
  recover->add_option("--out", r_out);

  // fuzz
  auto* fuzz = app.add_subcommand("fuzz", "property suites");
  std::string f_props = "all", f_csv;
  int f_budget = 50;
  fuzz->add_option("--properties", f_props);
  fuzz->add_option("--budget", f_budget);
  fuzz->add_option("--csv", f_csv);

  // gen
  auto* gen = app.add_subcommand("gen", "generate states and channels");
  std::string g_kind, g_dims, g_out;
  int g_rank = 0, g_cutoff = 8;
  double g_param = 0.5;
  gen->add_option("--kind", g_kind)->required();
  gen->add_option("--dims", g_dims);
  gen->add_option("--rank", g_rank);
  gen->add_option("--param", g_param, "squeeze r / mean occupation");
  gen->add_option("--cutoff", g_cutoff);
  gen->add_option("--out", g_out);

  CLI11_PARSE(app, argc, argv);

  try {
    load_config(g, app);
    if (*measure)
      return run_measure(g, m_state, m_name, m_partition, m_b, m_formula,
                         m_out);
    if (*sweep)
      return run_sweep(g, s_state, s_scheme, s_measure, s_partition, s_b,
                       s_csv, s_out);
    if (*bounds) return run_bounds(g, b_kind, b_d, b_pairs, b_csv_path);
    if (*capacity)
      return run_capacity(g, c_channel, c_f, c_e, c_restarts, c_out);
    if (*recover) return run_recover(g, r_state, r_labels, r_restarts, r_out);
    if (*fuzz) return run_fuzz_cmd(g, f_props, f_budget, f_csv);
    if (*gen)
      return run_gen(g, g_kind, g_dims, g_rank, g_param, g_cutoff, g_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
