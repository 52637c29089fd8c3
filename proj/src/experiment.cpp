#include "lpplab/experiment.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace lpp {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

MomentSummary summarize(const std::vector<double>& values) {
  if (values.size() >= 2) return moment_summary(EmpiricalSample(values));
  MomentSummary s;
  s.n = static_cast<int>(values.size());
  if (s.n == 1) s.mean = values.front();
  return s;
}

}  // namespace

CouplingSpec RunConfig::resolve() const {
  const LatticeSpec spec = parse_lattice(lattice);
  return parse_coupling(coupling, parse_marginal(marginal), spec);
}

std::string RunConfig::provenance() const {
  std::ostringstream os;
  os << "version=" << kVersion << "\nmarginal=" << marginal << "\nlattice=" << lattice
     << "\ncoupling=" << coupling << "\nreps=" << reps << "\nseed=" << seed;
  return os.str();
}

std::vector<double> simulate_lpp(const RunConfig& config) {
  if (config.reps < 1) throw std::invalid_argument("reps must be >= 1");
  const CouplingSpec cs = config.resolve();
  const auto reps = static_cast<std::size_t>(config.reps);
  std::vector<double> out(reps);
  auto worker = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      RngStream rng(config.seed, static_cast<std::uint64_t>(r));
      const FieldSample fs = sample_coupling(cs, rng);
      out[r] = lpp(cs.lattice, fs.field);
    }
  };
  unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, reps));
  if (threads == 1) {
    worker(0, reps);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (reps + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = t * chunk;
      if (lo >= reps) break;
      pool.emplace_back(worker, lo, std::min(reps, lo + chunk));
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

void write_sample_csv(const std::string& path, const std::vector<double>& values,
                      const std::string& provenance) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  std::istringstream prov(provenance);
  for (std::string line; std::getline(prov, line);) os << "# " << line << "\n";
  os << "replicate,value\n";
  for (std::size_t r = 0; r < values.size(); ++r)
    os << r << "," << fmt(values[r]) << "\n";
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::vector<double> read_sample_csv(const std::string& path, std::string* provenance) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open sample file: " + path);
  std::vector<double> values;
  std::string prov;
  for (std::string line; std::getline(is, line);) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      prov += line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1) + "\n";
      continue;
    }
    if (line.rfind("replicate", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("malformed sample row: " + line);
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  if (provenance) *provenance = prov;
  return values;
}

std::string summary_json(const RunConfig& config, const std::vector<double>& values) {
  const MomentSummary m = summarize(values);
  nlohmann::json j;
  j["config"] = {{"marginal", config.marginal}, {"lattice", config.lattice},
                 {"coupling", config.coupling}, {"reps", config.reps},
                 {"seed", config.seed},         {"version", kVersion}};
  j["n"] = m.n;
  j["mean"] = m.mean;
  j["var"] = m.variance;
  j["se_mean"] = m.se_mean;
  nlohmann::json q;
  if (values.size() >= 2) {
    const EmpiricalSample s(values);
    for (const int p : {1, 5, 25, 50, 75, 95, 99})
      q[std::to_string(p)] = s.quantile(p / 100.0);
  }
  j["quantiles"] = q;
  return j.dump(2);
}

std::string summary_csv(const RunConfig& config, const std::vector<double>& values) {
  const MomentSummary m = summarize(values);
  std::ostringstream os;
  std::istringstream prov(config.provenance());
  for (std::string line; std::getline(prov, line);) os << "# " << line << "\n";
  os << "n,mean,var,se_mean\n"
     << m.n << "," << fmt(m.mean) << "," << fmt(m.variance) << "," << fmt(m.se_mean)
     << "\n";
  return os.str();
}

}  // namespace lpp
