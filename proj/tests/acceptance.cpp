#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "sana/report.hpp"

using namespace sana;
namespace fs = std::filesystem;

namespace {

const std::string kScenarios = std::string(SANA_SOURCE_DIR) + "/scenarios/";
constexpr std::uint64_t kSeeds = 30;

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Bytes random_bytes(Rng& rng, std::size_t n) {
  Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(uniform_index(rng, 256));
  return b;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Batch {
  std::vector<Metrics> runs;
  double slowest = 0.0;
  std::vector<double> prevention() const {
    std::vector<double> out;
    for (const auto& m : runs) out.push_back(m.prevention_rate.value_or(0.0));
    return out;
  }
};

Batch run_seeds(const ScenarioConfig& c) {
  Batch b;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const auto t0 = std::chrono::steady_clock::now();
    b.runs.push_back(run(c, seed).metrics);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    b.slowest = std::max(b.slowest, dt.count());
  }
  return b;
}

void detection_bands(const Batch& sana_only, const Batch& with_ids) {
  const double base = *median(sana_only.prevention());
  verdict(1, base >= 0.60 && base <= 0.85 && sana_only.slowest <= 60.0,
          fmt("baseline median prevention %.4f over %llu seeds, band [0.60, 0.85]; slowest run %.2fs (limit 60s)",
              base, static_cast<unsigned long long>(kSeeds), sana_only.slowest));

  const double ids = *median(with_ids.prevention());
  verdict(2, ids >= 0.80 && ids <= 0.95 && ids > base && with_ids.slowest <= 60.0,
          fmt("with IDS at top-2 betweenness median prevention %.4f, band [0.80, 0.95], above baseline %.4f",
              ids, base));
}

void containment(const Batch& b) {
  std::vector<double> spread;
  for (const auto& m : b.runs) {
    if (m.infections_per_event) spread.push_back(*m.infections_per_event);
  }
  const auto med = median(spread);
  verdict(3, med && *med >= 2.0 && *med <= 5.0,
          fmt("median additional infections per worm entry %.2f over %zu runs, band [2, 5]", med.value_or(-1.0),
              spread.size()));
}

void identification(const Batch& b) {
  std::vector<std::uint64_t> pooled;
  for (const auto& m : b.runs) {
    pooled.insert(pooled.end(), m.identification_latencies.begin(), m.identification_latencies.end());
  }
  const auto med = median(pooled);
  verdict(4, med && *med >= 50.0 && *med <= 150.0,
          fmt("median identification latency %.1f steps over %zu identified infections, band [50, 150]",
              med.value_or(-1.0), pooled.size()));
}

void routing() {
  Rng rng(5005);
  std::size_t bad = 0;
  std::size_t pairs = 0;
  for (int g = 0; g < 200; ++g) {
    const Network net = oracle::random_small_graph(rng, 8);
    const RoutingTable rt(net);
    const auto ref = oracle::bellman_ford(net);
    for (NodeId a = 0; a < net.node_count(); ++a) {
      for (NodeId b = 0; b < net.node_count(); ++b) {
        ++pairs;
        if (rt.distance(a, b) != ref[a][b]) {
          ++bad;
          continue;
        }
        if (a == b) continue;
        const NodeId next = rt.next_hop(a, b);
        const auto& nb = net.neighbors(a);
        if (std::find(nb.begin(), nb.end(), next) == nb.end() || ref[next][b] + 1 != ref[a][b]) ++bad;
      }
    }
  }
  verdict(5, bad == 0, fmt("routing agrees with Bellman-Ford on %zu pairs in 200 graphs, %zu mismatches", pairs, bad));
}

void transport() {
  Rng rng(6006);
  TopologySpec spec = erdos_renyi_spec(16, 0.2, rng, 2);
  SimState s(build_topology(spec), 8, 4);
  struct Fuzz : StepHandlers {
    Rng rng{6007};
    void inject(SimState& st) override {
      const auto n = st.network.node_count();
      const auto k = poisson(rng, 8.0);
      for (std::uint64_t i = 0; i < k; ++i) {
        Packet p;
        p.src = static_cast<NodeId>(uniform_index(rng, n));
        do p.dst = static_cast<NodeId>(uniform_index(rng, n));
        while (p.dst == p.src);
        p.cls = bernoulli(rng, 0.3) ? TrafficClass::Immune : TrafficClass::Data;
        sana::inject(st, std::move(p));
      }
    }
    CheckOutcome check(SimState&, NodeId, NodeId, const Packet&) override {
      if (bernoulli(rng, 0.02)) return {true, 1, std::nullopt};
      return CheckOutcome::pass();
    }
  } fuzz;
  for (int i = 0; i < 10000; ++i) step(s, fuzz);
  const auto v = oracle::replay_transport(s.log, s.network, 8);
  verdict(6, v.total() == 0,
          fmt("10000-step transport fuzz, %zu events replayed: %s", s.log.size(), v.describe().c_str()));
}

void receptors() {
  Rng rng(7007);
  std::vector<Receptor> pool;
  for (int i = 0; i < 16; ++i) pool.push_back(gen_receptor(rng));
  std::size_t wrong = 0;
  std::size_t leaked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::set<std::size_t> req, held;
    while (req.empty()) {
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (bernoulli(rng, 0.15)) req.insert(i);
      }
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (bernoulli(rng, 0.7)) held.insert(i);
    }
    std::vector<PublicToken> pubs;
    for (auto i : req) pubs.push_back(pool[i].public_part);
    std::vector<PrivateToken> privs;
    for (auto i : held) privs.push_back(pool[i].private_part);
    const Bytes msg = random_bytes(rng, 24);
    const auto opened = try_open(seal(msg, pubs, 1, 0), privs);
    const bool covers = std::includes(held.begin(), held.end(), req.begin(), req.end());
    if (opened.has_value() != covers || (opened && *opened != msg)) ++wrong;
    if (!covers && opened) leaked += opened->size();
  }

  std::vector<Receptor> many;
  for (int i = 0; i < 10000; ++i) many.push_back(gen_receptor(rng));
  std::size_t cross = 0;
  std::size_t self_miss = 0;
  for (std::size_t i = 0; i < many.size(); ++i) {
    if (!match(many[i].public_part, many[i].private_part)) ++self_miss;
    for (std::size_t j = 0; j < many.size(); ++j) {
      if (i != j && match(many[i].public_part, many[j].private_part)) ++cross;
    }
  }
  verdict(7, wrong == 0 && leaked == 0 && cross == 0 && self_miss == 0,
          fmt("10000 seal/open trials: %zu wrong outcomes, %zu plaintext bytes leaked; 10000 receptors: "
              "%zu cross matches, %zu self misses",
              wrong, leaked, cross, self_miss));
}

void bloom() {
  Rng rng(8008);
  const double target = 0.01;
  std::vector<Bytes> sigs;
  for (int i = 0; i < 1000; ++i) sigs.push_back(random_bytes(rng, 16));
  const auto db = compress_signatures(sigs, target);
  std::size_t fn = 0;
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    if (!db.contains(sigs[i], static_cast<AttackId>(i))) ++fn;
  }
  std::size_t fp = 0;
  const std::size_t probes = 100000;
  for (std::size_t i = 0; i < probes; ++i) {
    if (db.contains(random_bytes(rng, 16))) ++fp;
  }
  const double fpr = static_cast<double>(fp) / probes;

  std::vector<Bytes> worm_sigs;
  for (int i = 0; i < 8; ++i) worm_sigs.push_back(random_bytes(rng, 8 + uniform_index(rng, 9)));
  const auto scanner = compress_signatures(worm_sigs, target);
  std::size_t tp = 0, cfp = 0, cfn = 0;
  for (const auto& item : oracle::mixed_corpus(rng, worm_sigs, 10000, 10000)) {
    const bool exact = exact_scan(item.payload, worm_sigs);
    const bool flagged = scanner.scan(item.payload).has_value();
    tp += flagged && exact;
    cfp += flagged && !exact;
    cfn += !flagged && exact;
  }
  const double recall = static_cast<double>(tp) / static_cast<double>(tp + cfn);
  const double precision = static_cast<double>(tp) / static_cast<double>(tp + cfp);
  verdict(8, fn == 0 && fpr <= 2 * target && recall == 1.0 && precision >= 0.98,
          fmt("1000 signatures: %zu false negatives, fpr %.4f over 1e5 probes (limit %.2f); "
              "20000-packet corpus recall %.4f precision %.4f",
              fn, fpr, 2 * target, recall, precision));
}

void pheromone() {
  PheromoneParams p;
  p.deposit = 0.37;
  p.evaporation = 0.07;
  PheromoneMap m(p);
  double sum = 0.0;
  bool additive = true;
  for (int i = 0; i < 25; ++i) {
    m.deposit({0, 1, Edge{0, 1}, 1, 0});
    sum += p.deposit;
    additive = additive && m.level(0, 1) == sum;
  }
  double worst = 0.0;
  const double start = m.level(0, 1);
  for (int t = 1; t <= 100; ++t) {
    m.evaporate();
    const double expect = start * std::pow(1.0 - p.evaporation, t);
    worst = std::max(worst, std::abs(m.level(0, 1) - expect) / expect);
  }

  Rng rng(9009);
  std::size_t snapshots = 0;
  std::size_t mismatched = 0;
  std::size_t declared = 0;
  for (int r = 0; r < 20; ++r) {
    const ScenarioConfig c = oracle::small_scenario(rng, 8);
    World w(c, 100 + static_cast<std::uint64_t>(r));
    for (TimeStep t = 0; t < c.horizon; ++t) {
      w.advance(1);
      const auto& net = w.state().network;
      const auto ants = oracle::ant_counts(w.population(), net.node_count());
      const auto got = agnosco_declare(w.pheromone(), ants);
      if (got != oracle::brute_declare(net, w.pheromone(), ants)) ++mismatched;
      declared += got.size();
      ++snapshots;
    }
  }
  verdict(9, additive && worst <= 1e-9 && mismatched == 0,
          fmt("deposits additive: %s; worst relative evaporation error %.2e (limit 1e-9); "
              "%zu of %zu snapshots from 20 runs disagree with brute force (%zu declarations)",
              additive ? "yes" : "no", worst, mismatched, snapshots, declared));
}

void determinism(const ScenarioConfig& c) {
  const auto dir = fs::temp_directory_path() / "sana_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto a = run(c, 11);
  const auto b = run(c, 11);
  a.log.write_file((dir / "a.log").string());
  b.log.write_file((dir / "b.log").string());
  for (const auto fmt_ : {ReportFormat::Csv, ReportFormat::Json}) {
    const std::string ext = fmt_ == ReportFormat::Csv ? ".csv" : ".json";
    emit_report(a.metrics, 11, fmt_, (dir / ("a" + ext)).string());
    emit_report(b.metrics, 11, fmt_, (dir / ("b" + ext)).string());
  }
  const bool logs = slurp(dir / "a.log") == slurp(dir / "b.log");
  const bool reports = slurp(dir / "a.csv") == slurp(dir / "b.csv") && slurp(dir / "a.json") == slurp(dir / "b.json");
  const bool replay = compute_metrics(EventLog::read_file((dir / "a.log").string())) == a.metrics;
  verdict(10, logs && reports && replay,
          fmt("baseline seed 11 twice: logs identical %s, reports identical %s, replayed metrics equal %s",
              logs ? "yes" : "no", reports ? "yes" : "no", replay ? "yes" : "no"));
  fs::remove_all(dir);
}

void redundancy(ScenarioConfig c) {
  c.stations.lymph_nodes.pop_back();
  c.stations.cnts.pop_back();
  std::size_t completed = 0;
  std::uint64_t identified = 0;
  std::uint64_t orphaned = 0;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    try {
      const auto m = run(c, seed).metrics;
      ++completed;
      identified += m.identification_latencies.size();
      orphaned += m.orphaned_identifications;
    } catch (const Error& e) {
      std::printf("  seed %llu: %s\n", static_cast<unsigned long long>(seed), e.what());
    }
  }
  verdict(11, completed == kSeeds && orphaned == 0,
          fmt("one lymph node and one CNTS removed: %zu/%llu runs completed, %llu identified infections, "
              "%llu orphaned",
              completed, static_cast<unsigned long long>(kSeeds), static_cast<unsigned long long>(identified),
              static_cast<unsigned long long>(orphaned)));
}

}  // namespace

int main() {
  const auto baseline = load_scenario(kScenarios + "baseline.scenario");
  const auto with_ids = load_scenario(kScenarios + "baseline_ids.scenario");
  const Batch sana_only = run_seeds(baseline);
  const Batch ids = run_seeds(with_ids);
  detection_bands(sana_only, ids);
  containment(sana_only);
  identification(sana_only);
  routing();
  transport();
  receptors();
  bloom();
  pheromone();
  determinism(baseline);
  redundancy(baseline);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
