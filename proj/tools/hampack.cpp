#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hampack/error.hpp"
#include "hampack/graph_io.hpp"
#include "hampack/hamilton.hpp"
#include "hampack/matching.hpp"
#include "hampack/params.hpp"
#include "hampack/pipelines.hpp"
#include "hampack/pseudorandom.hpp"
#include "hampack/report.hpp"
#include "hampack/sampling.hpp"

using namespace hampack;

namespace {

constexpr int kExitRefusal = 2;
constexpr int kExitAudit = 3;

// Writes through a temporary file so readers never see a partial file.
void write_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path);
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Bipartite text format: "bipartite left=<L> right=<R> m=<edges>" then "a b" lines.
void write_bipartite(std::ostream& out, const BipartiteGraph& g) {
  out << "bipartite left=" << g.left_size() << " right=" << g.right_size() << " m=" << g.edge_count() << "\n";
  for (auto [a, b] : g.edges()) out << a << " " << b << "\n";
}

BipartiteGraph read_bipartite(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string tag, l, r, m;
  in >> tag >> l >> r >> m;
  if (tag != "bipartite" || l.rfind("left=", 0) != 0 || r.rfind("right=", 0) != 0)
    throw InvalidInput(path + " is not a bipartite graph file");
  BipartiteGraph g(std::stoi(l.substr(5)), std::stoi(r.substr(6)));
  int a, b;
  while (in >> a >> b) g.add_edge(a, b);
  return g;
}

struct GraphArgs {
  std::string input;
  int n = 0;
  double p = 0.0;
  Seed seed = 1;
  std::optional<Seed> graph_seed;
};

void add_graph_options(CLI::App* cmd, GraphArgs& g) {
  cmd->add_option("--input", g.input, "Digraph file (text or .bin)");
  cmd->add_option("--n", g.n, "Vertices of D(n, p)");
  cmd->add_option("--p", g.p, "Arc probability of D(n, p)");
  cmd->add_option("--seed", g.seed, "Seed for every random choice");
  cmd->add_option("--graph-seed", g.graph_seed, "Seed for sampling D(n, p); defaults to --seed");
}

Digraph obtain_graph(const GraphArgs& g, GraphSource& src) {
  if (!g.input.empty()) {
    src.kind = "file";
    src.path = g.input;
    return load_digraph(g.input);
  }
  if (g.n <= 0 || !(g.p > 0.0 && g.p <= 1.0)) throw InvalidParameter("give --input, or --n and --p with 0 < p <= 1");
  src.kind = "dnp";
  src.p = g.p;
  src.seed = g.graph_seed.value_or(g.seed);
  return sample_dnp(g.n, g.p, src.seed);
}

double density(const Digraph& d) {
  return d.n() < 2 ? 0.0 : static_cast<double>(d.edge_count()) / (static_cast<double>(d.n()) * (d.n() - 1));
}

struct RunArgs {
  GraphArgs graph;
  std::optional<double> alpha;
  std::optional<int> ell, s, t;
  double lambda = 0.05;
  int partitions = 0;
  int jobs = 0;
  std::string json_out;
  std::string certificate;
  bool cycles = false;
};

struct RunOutcome {
  Json report;
  Json certificate;
  bool audit_ok = true;
  double achieved = 0.0;
  double reference = 0.0;
  double ratio = 0.0;
  int retries = 0;
  int failures = 0;
};

PolicyOverrides overrides_of(const RunArgs& a) {
  PolicyOverrides ov;
  ov.alpha = a.alpha;
  ov.ell = a.ell;
  ov.s = a.s;
  ov.t = a.t;
  return ov;
}

// Runs one pipeline on d. p is the model density (the empirical one for
// input files). Throws PolicyRefusal when the policy declines.
RunOutcome run_task(Task task, const Digraph& d, double p, Seed seed, const RunArgs& a, const GraphSource& src) {
  RunOptions opt;
  opt.jobs = a.jobs;
  const int n = d.n();
  const double np = n * p;
  RunOutcome o;
  PolicyOverrides ov = overrides_of(a);
  switch (task) {
    case Task::Pack: {
      const auto params = parameter_policy(n, p, Task::Pack, ov);
      const PackReport r = pack(d, params, seed, opt);
      o.report = to_json(r, a.cycles);
      o.certificate = make_certificate(d, src, r);
      o.audit_ok = r.audit.ok;
      o.achieved = r.achieved();
      o.reference = np;
      o.retries = r.retries();
      o.failures = r.failures();
      break;
    }
    case Task::PackPseudo: {
      const PackReport r = pack_pseudorandom(d, a.lambda, seed, opt, ov);
      o.report = to_json(r, a.cycles);
      o.certificate = make_certificate(d, src, r);
      o.audit_ok = r.audit.ok;
      o.achieved = r.achieved();
      o.reference = np;
      o.retries = r.retries();
      o.failures = r.failures();
      break;
    }
    case Task::Cover: {
      const auto params = parameter_policy(n, p, Task::Cover, ov);
      const CoverReport r = cover(d, params, seed, opt);
      o.report = to_json(r, a.cycles);
      o.certificate = make_certificate(d, src, r);
      o.audit_ok = r.audit.ok;
      o.achieved = static_cast<double>(r.cycles.size());
      o.reference = np;
      o.retries = r.retries();
      o.failures = r.failures();
      break;
    }
    case Task::Count: {
      auto params = parameter_policy(n, p, Task::Count, ov);
      if (a.partitions > 0) params.partitions = a.partitions;
      const CountCertificate c = count_certify(d, params, seed, params.partitions, opt);
      o.report = to_json(c);
      o.certificate = make_certificate(d, src, c);
      o.audit_ok = c.bound_holds;
      // Log-scale: achieved is log of the exact count when known, else of
      // the certified bound; ratio is the per-vertex gap to log(n! p^n).
      o.achieved = c.exact ? c.log_exact : c.log_certified;
      o.reference = c.log_reference;
      for (const auto& pc : c.partitions) o.failures += pc.discarded;
      break;
    }
  }
  o.ratio = task == Task::Count ? (o.achieved - o.reference) / n : (o.reference > 0 ? o.achieved / o.reference : 0.0);
  return o;
}

int run_command(Task task, const RunArgs& a) {
  GraphSource src;
  const Digraph d = obtain_graph(a.graph, src);
  const double p = src.kind == "dnp" ? src.p : density(d);
  const auto t0 = std::chrono::steady_clock::now();
  RunOutcome o;
  try {
    o = run_task(task, d, p, a.graph.seed, a, src);
  } catch (const PolicyRefusal& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitRefusal;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  o.report["config"] = {{"task", std::string(task_name(task))},
                        {"input", a.graph.input},
                        {"n", d.n()},
                        {"p", p},
                        {"seed", a.graph.seed},
                        {"graph_seed", src.seed},
                        {"alpha_override", a.alpha ? Json(*a.alpha) : Json(nullptr)},
                        {"ell", a.ell ? Json(*a.ell) : Json(nullptr)},
                        {"s", a.s ? Json(*a.s) : Json(nullptr)},
                        {"t", a.t ? Json(*a.t) : Json(nullptr)},
                        {"lambda", a.lambda},
                        {"partitions", a.partitions},
                        {"jobs", a.jobs}};
  o.report["wall_ms"] = ms;
  if (!a.json_out.empty()) write_atomic(a.json_out, o.report.dump(2) + "\n");
  if (!a.certificate.empty()) write_atomic(a.certificate, o.certificate.dump() + "\n");

  std::cout << task_name(task) << ": n=" << d.n() << " p=" << p << " seed=" << a.graph.seed << "\n";
  if (task == Task::Count) {
    std::cout << "  log certified=" << o.report["log_certified"] << " log reference=" << o.reference;
    if (o.report.contains("exact")) std::cout << " exact=" << o.report["exact"].get<std::string>();
    std::cout << " gap/n=" << o.ratio << "\n";
  } else {
    std::cout << "  cycles=" << o.achieved << " np=" << o.reference << " ratio=" << o.ratio
              << " retries=" << o.retries << " failures=" << o.failures << "\n";
  }
  std::cout << "  audit " << (o.audit_ok ? "ok" : "FAILED") << " (" << ms << " ms)\n";
  if (!o.audit_ok) {
    for (const auto& issue : o.report.value("audit", Json::object()).value("issues", Json::array()))
      std::cerr << "  " << issue.get<std::string>() << "\n";
    return kExitAudit;
  }
  return 0;
}

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    T v;
    if (!(is >> v)) throw InvalidParameter("bad list item '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidParameter("empty list '" + text + "'");
  return out;
}

struct SweepArgs {
  std::string task = "pack";
  std::string ns;
  std::string ps;
  int seeds = 1;
  Seed first_seed = 1;
  int jobs = 1;
  std::string out;
  RunArgs run;
};

int sweep_command(const SweepArgs& a) {
  const Task task = parse_task(a.task);
  const auto ns = parse_list<int>(a.ns);
  const auto ps = parse_list<double>(a.ps);
  struct Job {
    int n;
    double p;
    Seed seed;
  };
  std::vector<Job> jobs;
  for (int n : ns)
    for (double p : ps)
      for (int k = 0; k < a.seeds; ++k) jobs.push_back({n, p, a.first_seed + static_cast<Seed>(k)});
  std::vector<std::string> rows(jobs.size());
  std::vector<std::string> errors(jobs.size());
  RunArgs run = a.run;
  run.jobs = 1;
  // Independent runs in parallel; rows are written in job order.
#pragma omp parallel for schedule(dynamic) num_threads(a.jobs > 0 ? a.jobs : 1)
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& j = jobs[i];
    try {
      GraphSource src;
      src.p = j.p;
      src.seed = j.seed;
      const Digraph d = sample_dnp(j.n, j.p, j.seed);
      const auto t0 = std::chrono::steady_clock::now();
      const RunOutcome o = run_task(task, d, j.p, j.seed, run, src);
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      std::ostringstream row;
      row << j.n << "," << j.p << "," << j.seed << "," << task_name(task) << "," << o.achieved << "," << o.reference
          << "," << o.ratio << "," << static_cast<long long>(std::llround(ms)) << "," << o.retries << ","
          << o.failures;
      rows[i] = row.str();
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  std::ostringstream csv;
  csv << "n,p,seed,task,achieved,reference,ratio,wall_ms,retries,failures\n";
  int refused = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!errors[i].empty()) {
      ++refused;
      std::cerr << "n=" << jobs[i].n << " p=" << jobs[i].p << " seed=" << jobs[i].seed << ": " << errors[i] << "\n";
      continue;
    }
    csv << rows[i] << "\n";
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    write_atomic(a.out, csv.str());
  }
  return refused == static_cast<int>(jobs.size()) ? kExitRefusal : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamilton cycle packing, covering and counting in random digraphs"};
  app.set_config("--config", "", "INI file with one section per subcommand ([pack] n=600); flags take precedence");
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Sample and save a random digraph or bipartite graph");
  int gen_n = 0, gen_r = 0;
  double gen_p = 0.0;
  Seed gen_seed = 1;
  std::string gen_model = "dnp", gen_out;
  gen->add_option("--n", gen_n, "Vertices (per side for bipartite models)")->required();
  gen->add_option("--p", gen_p, "Edge probability");
  gen->add_option("--r", gen_r, "Degree for the regular bipartite model");
  gen->add_option("--model", gen_model, "dnp, bipartite or regular-bipartite")
      ->check(CLI::IsMember({"dnp", "bipartite", "regular-bipartite"}));
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--out", gen_out, "Output path; .bin selects the binary digraph format")->required();

  // pipelines
  std::map<std::string, Task> tasks = {
      {"pack", Task::Pack}, {"cover", Task::Cover}, {"count", Task::Count}, {"pack-pseudo", Task::PackPseudo}};
  std::map<std::string, RunArgs> run_args;
  std::map<std::string, CLI::App*> run_cmds;
  for (const auto& [name, task] : tasks) {
    auto* cmd = app.add_subcommand(name, std::string("Run the ") + name + " pipeline");
    RunArgs& a = run_args[name];
    add_graph_options(cmd, a.graph);
    cmd->add_option("--alpha-override", a.alpha, "Fix alpha instead of the policy choice");
    cmd->add_option("--ell", a.ell, "Fix the number of blocks");
    cmd->add_option("--s", a.s, "Fix |V0|");
    cmd->add_option("--t", a.t, "Fix the number of partitions");
    if (task == Task::PackPseudo) cmd->add_option("--lambda", a.lambda, "Pseudo-randomness parameter");
    if (task == Task::Count) cmd->add_option("--partitions", a.partitions, "Partitions to sample");
    cmd->add_option("--jobs", a.jobs, "Worker threads (0 = all)");
    cmd->add_option("--json-out", a.json_out, "Write the JSON report here");
    cmd->add_option("--certificate", a.certificate, "Write a certificate for 'verify' here");
    cmd->add_flag("--cycles", a.cycles, "Include cycle lists in the JSON report");
    run_cmds[name] = cmd;
  }

  // verify
  auto* ver = app.add_subcommand("verify", "Re-check a certificate file");
  std::string ver_path;
  ver->add_option("certificate", ver_path, "Certificate file")->required();

  // check-pseudo
  auto* chk = app.add_subcommand("check-pseudo", "Check the pseudo-randomness conditions");
  GraphArgs chk_graph;
  double chk_lambda = 0.05;
  std::int64_t chk_budget = 10'000;
  bool chk_conditions = false, chk_confirm = false;
  int chk_appendix = 0;
  std::string chk_json;
  add_graph_options(chk, chk_graph);
  chk->add_option("--lambda", chk_lambda, "Pseudo-randomness parameter");
  chk->add_option("--budget", chk_budget, "Random subset samples per sampled condition");
  chk->add_flag("--conditions", chk_conditions, "Also check the Hamiltonicity conditions P1, P2*, P3*");
  chk->add_flag("--confirm", chk_confirm, "With --conditions, run the Hamilton cycle search");
  chk->add_option("--appendix", chk_appendix, "Trials of the structural lemma checks (0 = skip)");
  chk->add_option("--json-out", chk_json, "Write the JSON report here");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Cartesian sweep over n, p and seeds; CSV on stdout or --out");
  SweepArgs sweep;
  sw->add_option("--task", sweep.task, "pack, cover, count or pack-pseudo")
      ->check(CLI::IsMember({"pack", "cover", "count", "pack-pseudo"}));
  sw->add_option("--n", sweep.ns, "Comma-separated vertex counts")->required();
  sw->add_option("--p", sweep.ps, "Comma-separated probabilities")->required();
  sw->add_option("--seeds", sweep.seeds, "Seeds per (n, p)");
  sw->add_option("--first-seed", sweep.first_seed, "First seed");
  sw->add_option("--jobs", sweep.jobs, "Runs in parallel");
  sw->add_option("--lambda", sweep.run.lambda, "Pseudo-randomness parameter for pack-pseudo");
  sw->add_option("--out", sweep.out, "CSV path");

  // oracle
  auto* orc = app.add_subcommand("oracle", "Exact counting utilities");
  bool orc_ham = false, orc_perm = false, orc_brute = false;
  int orc_complete = 0;
  std::string orc_input;
  orc->add_flag("--count-ham", orc_ham, "Count directed Hamilton cycles");
  orc->add_flag("--permanent", orc_perm, "Count perfect matchings of a bipartite graph");
  orc->add_flag("--brute", orc_brute, "Use the brute-force reference implementation");
  orc->add_option("--complete", orc_complete, "Use the complete digraph (or K_{N,N}) on this many vertices");
  orc->add_option("--input", orc_input, "Digraph file (--count-ham) or bipartite file (--permanent)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      if (gen_model == "dnp") {
        save_digraph(gen_out, sample_dnp(gen_n, gen_p, gen_seed));
      } else {
        const BipartiteGraph g = gen_model == "bipartite" ? sample_bipartite(gen_n, gen_n, gen_p, gen_seed)
                                                          : sample_regular_bipartite(gen_n, gen_r, gen_seed);
        std::ostringstream ss;
        write_bipartite(ss, g);
        write_atomic(gen_out, ss.str());
      }
      std::cout << "wrote " << gen_out << "\n";
      return 0;
    }
    for (const auto& [name, cmd] : run_cmds)
      if (*cmd) return run_command(tasks.at(name), run_args.at(name));
    if (*ver) {
      const VerifyResult r = verify_certificate(Json::parse(read_file(ver_path)));
      for (const auto& issue : r.issues) std::cerr << issue << "\n";
      if (!r.ok) {
        if (r.bad_index) std::cout << "FAILED at index " << *r.bad_index << "\n";
        else std::cout << "FAILED\n";
        return kExitAudit;
      }
      std::cout << "ok\n";
      return 0;
    }
    if (*chk) {
      GraphSource src;
      const Digraph d = obtain_graph(chk_graph, src);
      const double p = src.kind == "dnp" ? src.p : density(d);
      PseudoBudget budget;
      budget.samples = chk_budget;
      budget.seed = chk_graph.seed;
      const PseudoRandomReport r = check_pseudorandom(d, chk_lambda, p, budget);
      Json out = {{"pseudorandom", to_json(r)}};
      std::cout << "P1 " << r.p1.label() << ", P2 " << r.p2.label() << " (" << r.p2.method << "), P3 "
                << r.p3.label() << " (" << r.p3.method << ")\n";
      if (chk_conditions) {
        const auto h = check_thm62_conditions(d, chk_lambda, p, budget, chk_confirm);
        out["hamiltonicity"] = to_json(h);
        std::cout << "P1 " << h.p1.label() << ", P2* " << h.p2_star.label() << ", P3* " << h.p3_star.label()
                  << "; predicts Hamiltonian: " << (h.predicts_hamiltonian ? "yes" : "no");
        if (h.confirmed) std::cout << "; cycle found: " << (*h.confirmed ? "yes" : "no");
        std::cout << "\n";
      }
      if (chk_appendix > 0) {
        PolicyOverrides ov;
        ov.lambda = chk_lambda;
        const auto params = parameter_policy(d.n(), p, Task::PackPseudo, ov);
        const auto ap = validate_appendix_lemmas(d, chk_lambda, params, chk_appendix, chk_graph.seed, budget);
        out["appendix"] = to_json(ap);
        for (const auto& c : ap.checks)
          std::cout << c.lemma << " " << c.property << ": " << c.passed << "/" << c.trials << "\n";
      }
      if (!chk_json.empty()) write_atomic(chk_json, out.dump(2) + "\n");
      return 0;
    }
    if (*sw) return sweep_command(sweep);
    if (*orc) {
      if (orc_ham == orc_perm) throw InvalidParameter("choose one of --count-ham and --permanent");
      if (orc_ham) {
        const Digraph d = orc_complete > 0 ? Digraph::complete(orc_complete) : load_digraph(orc_input);
        std::cout << (orc_brute ? count_hamilton_reference(d) : count_hamilton_exact(d)) << "\n";
      } else {
        const BipartiteGraph g =
            orc_complete > 0 ? BipartiteGraph::complete(orc_complete, orc_complete) : read_bipartite(orc_input);
        std::cout << (orc_brute ? count_pms_reference(g) : count_pms(g)) << "\n";
      }
      return 0;
    }
  } catch (const PolicyRefusal& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitRefusal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
