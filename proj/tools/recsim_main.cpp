// recsim: channel-simulation samplers, index coders and benchmark sweeps.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "recsim/bench.hpp"
#include "recsim/bnb.hpp"
#include "recsim/coders.hpp"
#include "recsim/distributions.hpp"
#include "recsim/divergences.hpp"
#include "recsim/samplers.hpp"
#include "recsim/special.hpp"
#include "recsim/stretch.hpp"
#include "recsim/validation.hpp"
#include "recsim/width.hpp"

namespace {

using namespace recsim;

// "lo..hi:count" (inclusive linspace) or a comma list "1,4,8".
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  auto dots = text.find("..");
  if (dots != std::string::npos) {
    auto colon = text.find(':', dots);
    if (colon == std::string::npos) throw CLI::ValidationError("grid needs lo..hi:count");
    double lo = std::stod(text.substr(0, dots));
    double hi = std::stod(text.substr(dots + 2, colon - dots - 2));
    int count = std::stoi(text.substr(colon + 1));
    if (count < 1 || !(hi >= lo)) throw CLI::ValidationError("bad grid range");
    for (int i = 0; i < count; ++i)
      out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw CLI::ValidationError("empty grid");
  return out;
}

// "gauss:mean,var" | "laplace:loc,scale" | "unif:lo,hi"
ContinuousDistribution parse_dist(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("distribution needs kind:a,b");
  std::string kind = text.substr(0, colon);
  auto comma = text.find(',', colon);
  if (comma == std::string::npos) throw CLI::ValidationError("distribution needs two params");
  double a = std::stod(text.substr(colon + 1, comma - colon - 1));
  double b = std::stod(text.substr(comma + 1));
  if (kind == "gauss") return ContinuousDistribution::gaussian(a, b);
  if (kind == "laplace") return ContinuousDistribution::laplace(a, b);
  if (kind == "unif") return ContinuousDistribution::uniform(a, b);
  throw CLI::ValidationError("unknown distribution kind: " + kind);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << content;
}

void write_bits(const std::string& path, const BitString& bits) {
  auto bytes = bits.serialize();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

BitString read_bits(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return BitString::deserialize(bytes);
}

struct SampleSetup {
  TargetProposalPair pair;
  bench::Algorithm alg;
  double bound_m;
  double alpha;
  std::optional<StretchFunction> stretch;
};

SampleSetup build_setup(const std::string& alg_name, const std::string& target_text,
                        const std::string& proposal_text, double bound_opt, double alpha_opt,
                        const std::string& dump_stretch) {
  SampleSetup s{make_pair(parse_dist(target_text), parse_dist(proposal_text)),
                bench::parse_algorithm(alg_name), 0.0, 0.0, std::nullopt};
  double dkl = kl_divergence(s.pair);
  s.bound_m = bound_opt > 0.0 ? bound_opt
                              : (s.pair.sup_bound ? *s.pair.sup_bound
                                                  : std::exp2(renyi_inf(s.pair)));
  using bench::Algorithm;
  const double lbe = special::kLbE, gamma = special::kEulerGamma;
  switch (s.alg) {
    case Algorithm::BnbAStar:
      s.alpha = 1.0 + 1.0 / ((std::log2(s.bound_m) + 2.0) / (lbe - 1.0) + 2.0);
      break;
    case Algorithm::BnbGprs:
      s.alpha = 1.0 + 1.0 / ((dkl + 2.0 + (1.0 + gamma) * lbe) / (lbe - 1.0) + 2.0);
      break;
    default:
      s.alpha = 1.0 + 1.0 / (dkl + 1.0);
      break;
  }
  if (alpha_opt > 1.0) s.alpha = alpha_opt;
  if (s.alg == Algorithm::Gprs || s.alg == Algorithm::GprsPar ||
      s.alg == Algorithm::GprsLim || s.alg == Algorithm::BnbGprs) {
    s.stretch = solve_stretch(s.pair, make_width(s.pair), 1e13, 1e-9);
    if (!dump_stretch.empty()) {
      std::ostringstream os;
      os << "h,sigma_h,sha_prime\n";
      os.precision(12);
      for (std::size_t i = 0; i < s.stretch->t.size(); ++i)
        os << s.stretch->h[i] << "," << s.stretch->t[i] << "," << s.stretch->hp[i] << "\n";
      write_file(dump_stretch, os.str());
    }
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recsim: relative entropy coding with Poisson-process samplers"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--threads", workers, "worker threads (0 = all, capped by RECSIM_THREADS)");

  // ---- bench ----
  auto* bench_cmd = app.add_subcommand("bench", "Monte Carlo sweeps");
  bench_cmd->require_subcommand(1);
  std::string mi_text = "0.1..12:24", algs_text, out_path, seed_text = "0xC0FFEE";
  std::string delta_text = "2..25:12";
  bench::SweepConfig cfg;
  bool deterministic = false;

  auto* awgn = bench_cmd->add_subcommand("awgn", "1-D AWGN channel sweep over MI");
  awgn->add_option("--mi", mi_text, "MI grid in bits, lo..hi:count or list");
  awgn->add_option("--trials", cfg.trials, "runs per setting");
  awgn->add_option("--seed", seed_text, "base seed (decimal or 0x hex)");
  awgn->add_option("--algs", algs_text, "comma list: rs,astar,gprs,bnb-astar,...");
  awgn->add_option("--mi-cap", cfg.mi_cap, "skip general samplers above this MI");
  awgn->add_option("--par-j", cfg.par_threads, "J for the parallel variants");
  awgn->add_option("--eps", cfg.limit_eps, "TV budget for the limited variants");
  awgn->add_option("--out", out_path, "output CSV path")->required();
  awgn->add_flag("--deterministic", deterministic, "suppress the timestamp header");

  auto* fixedkl = bench_cmd->add_subcommand("fixedkl", "fixed-KL sweep over D_inf");
  fixedkl->add_option("--kappa", cfg.kappa, "target D_KL in bits");
  fixedkl->add_option("--delta", delta_text, "D_inf grid in bits");
  fixedkl->add_option("--trials", cfg.trials, "runs per setting");
  fixedkl->add_option("--seed", seed_text, "base seed");
  fixedkl->add_option("--algs", algs_text, "comma list (default bnb-astar,bnb-gprs)");
  fixedkl->add_option("--out", out_path, "output CSV path")->required();
  fixedkl->add_flag("--deterministic", deterministic, "suppress the timestamp header");

  // ---- div ----
  auto* div_cmd = app.add_subcommand("div", "divergence reports");
  auto* div_report = div_cmd->add_subcommand("report", "D_CS vs D_KL gap tables");
  std::string lnb_text = "0..6:13", dims_text = "1,2,4,8,16,32,64";
  double quad_tol = 1e-8;
  div_report->add_option("--lnb", lnb_text, "-ln b grid for the Laplace panel");
  div_report->add_option("--dims", dims_text, "dimension list for the Gaussian panel");
  div_report->add_option("--tol", quad_tol, "quadrature tolerance");
  div_report->add_option("--out", out_path, "output CSV path")->required();
  div_report->add_flag("--deterministic", deterministic, "suppress the timestamp header");

  // ---- validate ----
  auto* validate = app.add_subcommand("validate", "acceptance criteria suite");
  std::string json_path;
  bool quick = false;
  validate->add_option("--json", json_path, "write the JSON report here");
  validate->add_option("--seed", seed_text, "base seed");
  validate->add_flag("--quick", quick, "reduced Monte Carlo sizes");

  // ---- sample / decode ----
  auto* sample = app.add_subcommand("sample", "run one encoder and emit its code");
  std::string alg_name = "bnb-gprs", target_text, proposal_text, encode_path, dump_stretch;
  double bound_opt = 0.0, alpha_opt = 0.0;
  sample->add_option("--alg", alg_name, "rs|astar|gprs|bnb-astar|bnb-gprs");
  sample->add_option("--target", target_text, "target, e.g. gauss:1,0.0625")->required();
  sample->add_option("--proposal", proposal_text, "proposal, e.g. gauss:0,1")->required();
  sample->add_option("--seed", seed_text, "shared PRNG seed");
  sample->add_option("--bound", bound_opt, "ratio bound M (default: analytic sup)");
  sample->add_option("--alpha", alpha_opt, "zeta exponent (default: analytic)");
  sample->add_option("--encode", encode_path, "write the serialized code here");
  sample->add_option("--dump-stretch", dump_stretch, "dump the sigma table as CSV");

  auto* decode = app.add_subcommand("decode", "decode a code back to its sample");
  std::string in_path;
  decode->add_option("--alg", alg_name, "algorithm the code was produced with");
  decode->add_option("--target", target_text, "target distribution")->required();
  decode->add_option("--proposal", proposal_text, "proposal distribution")->required();
  decode->add_option("--seed", seed_text, "shared PRNG seed");
  decode->add_option("--alpha", alpha_opt, "zeta exponent (default: analytic)");
  decode->add_option("--in", in_path, "serialized code path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.workers = workers;
    cfg.seed = parse_seed(seed_text.c_str());
    if (!algs_text.empty()) cfg.algs = bench::parse_algorithms(algs_text);

    if (awgn->parsed()) {
      cfg.mi_grid = parse_grid(mi_text);
      auto rows = bench::run_awgn_sweep(cfg);
      write_file(out_path, bench::to_csv(rows, deterministic));
      std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    } else if (fixedkl->parsed()) {
      cfg.delta_grid = parse_grid(delta_text);
      auto rows = bench::run_fixedkl_sweep(cfg);
      write_file(out_path, bench::to_csv(rows, deterministic));
      std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    } else if (div_report->parsed()) {
      bench::DivergenceConfig dcfg;
      dcfg.laplace_minus_ln_b = parse_grid(lnb_text);
      for (double d : parse_grid(dims_text)) dcfg.gauss_dims.push_back(static_cast<int>(d));
      dcfg.quad_tol = quad_tol;
      auto rows = bench::run_divergence_report(dcfg);
      write_file(out_path, bench::to_csv(rows, deterministic));
      std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    } else if (validate->parsed()) {
      validation::Options vopt;
      vopt.seed = parse_seed(seed_text.c_str());
      vopt.quick = quick;
      vopt.workers = workers;
      auto results = validation::run_all(vopt);
      for (const auto& r : results)
        std::cout << "criterion " << r.id << " [" << r.name << "]: "
                  << (r.pass ? "PASS" : "FAIL") << "\n";
      if (!json_path.empty()) write_file(json_path, validation::to_json(results));
      return validation::all_pass(results) ? 0 : 1;
    } else if (sample->parsed()) {
      auto setup = build_setup(alg_name, target_text, proposal_text, bound_opt, alpha_opt,
                               dump_stretch);
      std::uint64_t seed = parse_seed(seed_text.c_str());
      BitString code;
      double value = 0.0;
      std::uint64_t index = 0, steps = 0;
      const char* index_label = "index";
      using bench::Algorithm;
      switch (setup.alg) {
        case Algorithm::RS: {
          auto r = rejection_sample(setup.pair, setup.bound_m, seed);
          value = r.sample; index = r.selected_index; steps = r.steps;
          code = zeta_encode(r.selected_index, setup.alpha);
          break;
        }
        case Algorithm::AStar: {
          auto r = astar_sample(setup.pair, setup.bound_m, seed);
          value = r.sample; index = r.selected_index; steps = r.steps;
          code = zeta_encode(r.selected_index, setup.alpha);
          break;
        }
        case Algorithm::Gprs: {
          auto r = gprs_sample(setup.pair, *setup.stretch, seed);
          value = r.sample; index = r.selected_index; steps = r.steps;
          code = zeta_encode(r.selected_index, setup.alpha);
          break;
        }
        case Algorithm::BnbAStar: {
          auto r = bnb_astar(setup.pair, setup.bound_m, seed);
          value = r.sample; index = r.accept_depth; steps = r.steps;
          index_label = "depth";
          code = encode_bnb_run(r, setup.alpha);
          break;
        }
        case Algorithm::BnbGprs: {
          auto r = bnb_gprs(setup.pair, *setup.stretch, seed);
          value = r.sample; index = r.accept_depth; steps = r.steps;
          index_label = "depth";
          code = encode_bnb_run(r, setup.alpha);
          break;
        }
        default:
          throw std::runtime_error("sample: unsupported algorithm " + alg_name);
      }
      std::printf("sample=%.17g %s=%llu steps=%llu bits=%zu\n", value, index_label,
                  static_cast<unsigned long long>(index),
                  static_cast<unsigned long long>(steps), code.size());
      if (!encode_path.empty()) write_bits(encode_path, code);
    } else if (decode->parsed()) {
      auto setup = build_setup(alg_name, target_text, proposal_text, bound_opt, alpha_opt, "");
      std::uint64_t seed = parse_seed(seed_text.c_str());
      BitString code = read_bits(in_path);
      BitReader reader(code);
      double value = 0.0;
      using bench::Algorithm;
      if (setup.alg == Algorithm::BnbAStar || setup.alg == Algorithm::BnbGprs) {
        auto dec = decode_bnb_run(reader, setup.pair, seed, setup.alpha);
        value = dec.sample;
      } else {
        std::uint64_t n = zeta_decode(reader, setup.alpha);
        value = decode_global(seed, n, setup.pair.proposal);
      }
      std::printf("sample=%.17g\n", value);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
