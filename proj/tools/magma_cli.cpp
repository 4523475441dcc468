#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "magma/algebra.hpp"
#include "magma/core.hpp"
#include "magma/detect.hpp"
#include "magma/expr.hpp"
#include "magma/reduce.hpp"
#include "magma/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using json = nlohmann::json;
using namespace magma;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MagmaError(Err::ParseError, "cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MagmaError(Err::ParseError, "cannot write file: " + path);
  out << text;
}

uint64_t default_seed() {
  if (const char* env = std::getenv("MAGMA_SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

double now_ms() {
  using namespace std::chrono;
  return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

struct Timer {
  double t0 = now_ms();
  double ms() const { return now_ms() - t0; }
};

json verdict_json(const Verdict& v) {
  json j;
  j["outcome"] = v.holds ? "holds" : "fails";
  j["err_bound"] = v.err_bound;
  if (v.witness) j["witness"] = {v.witness->a, v.witness->b, v.witness->c};
  return j;
}

double fit_slope(const std::vector<std::pair<long long, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = (int)pts.size();
  for (auto [size, t] : pts) {
    double x = std::log((double)size), y = std::log(std::max(t, 1e-9));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_verify(const std::string& file, const std::string& identity_text,
               const std::string& engine, uint64_t seed, int trials, bool as_json,
               bool find_witness) {
  Structure s = load_structure(slurp(file));
  Identity id = parse_identity(identity_text, s.op_names());
  FieldConfig cfg;
  cfg.seed = seed;
  cfg.trials = trials;

  std::string regime = "-";
  bool subexpr_pair = false;
  try {
    regime = regime_name(classify_identity(id));
  } catch (const MagmaError& e) {
    if (e.kind != Err::SubexpressionPair) throw;
    subexpr_pair = true;
    regime = "subexpression-pair";
  }

  Timer timer;
  Verdict v;
  std::string used = engine;
  if (engine == "auto") used = subexpr_pair ? "brute" : "pit";
  if (used == "brute") {
    v = brute_force_verify(s, id);
  } else if (used == "pit") {
    v = verify_identity(s, id, cfg);
  } else if (used == "freivalds") {
    // accepts exactly the left-distributivity shape a M (b P c) = (a M b) P (a M c)
    Identity want = id;
    if (id.constant_term || id.lhs->leaf_node || id.lhs->r->leaf_node)
      throw MagmaError(Err::ParseError, "freivalds engine needs a distributivity identity");
    std::string mul = id.lhs->op, add = id.lhs->r->op;
    Identity dist = parse_identity("a " + mul + " (b " + add + " c) = (a " + mul + " b) " + add +
                                       " (a " + mul + " c)",
                                   s.op_names());
    if (to_string(dist) != to_string(id))
      throw MagmaError(Err::ParseError, "freivalds engine needs a distributivity identity");
    v = freivalds_distributivity(s, cfg, {}, mul, add);
  } else {
    std::cerr << "unknown engine: " << engine << "\n";
    return 2;
  }
  double wall = timer.ms();

  if (!v.holds && !v.witness && find_witness) {
    Verdict bw = brute_force_verify(s, id);
    v.witness = bw.witness;
  }

  if (as_json) {
    json j;
    j["command"] = "verify";
    j["identity"] = to_string(id);
    j["regime"] = regime;
    j["engine"] = used;
    j["seed"] = seed;
    j["trials"] = trials;
    j["wall_time_ms"] = wall;
    j.update(verdict_json(v));
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (v.holds ? "holds" : "fails") << " (regime " << regime << ", engine " << used
              << ")";
    if (v.witness)
      std::cout << " witness a=" << v.witness->a << " b=" << v.witness->b << " c=" << v.witness->c;
    if (v.holds && v.err_bound > 0) std::cout << " err<=" << v.err_bound;
    std::cout << "\n";
  }
  return v.holds ? 0 : 1;
}

int cmd_detect(const std::string& kind, const std::vector<std::string>& files, int k,
               bool as_json) {
  json j;
  j["command"] = "detect";
  j["kind"] = kind;
  bool found = false;
  if (kind == "kap") {
    auto a = detect::load_intset(slurp(files.at(0)));
    auto w = detect::detect_kap(a, k);
    found = w.has_value();
    if (w) j["witness"] = {w->start, w->step};
  } else if (kind == "multikap") {
    std::vector<detect::IntSet> as;
    for (const auto& f : files) as.push_back(detect::load_intset(slurp(f)));
    auto w = detect::detect_multichromatic_kap(as);
    found = w.has_value();
    if (w) j["witness"] = {w->start, w->step};
  } else if (kind == "square") {
    auto m = detect::load_bitmat(slurp(files.at(0)));
    auto w = detect::detect_square(m);
    found = w.has_value();
    if (w) j["witness"] = {w->i, w->j, w->k};
  } else if (kind == "multisquare" || kind == "t") {
    if (files.size() != 4) throw MagmaError(Err::ArityMismatch, "need four matrices");
    std::array<detect::BinaryMatrix, 4> ms{
        detect::load_bitmat(slurp(files[0])), detect::load_bitmat(slurp(files[1])),
        detect::load_bitmat(slurp(files[2])), detect::load_bitmat(slurp(files[3]))};
    auto w = kind == "t" ? detect::detect_multichromatic_T(ms)
                         : detect::detect_multichromatic_square(ms);
    found = w.has_value();
    if (w) j["witness"] = {w->i, w->j, w->k};
  } else if (kind == "triangle") {
    auto m = detect::load_bitmat(slurp(files.at(0)));
    auto w = detect::detect_triangle(m);
    found = w.has_value();
    if (w) j["witness"] = {(*w)[0], (*w)[1], (*w)[2]};
  } else if (kind == "zerotriangle") {
    auto g = detect::load_tripartite(slurp(files.at(0)));
    auto w = detect::detect_zero_triangle(g);
    found = w.has_value();
    if (w) j["witness"] = {(*w)[0], (*w)[1], (*w)[2]};
  } else if (kind == "hyperclique") {
    auto h = detect::load_hypergraph(slurp(files.at(0)));
    auto w = detect::detect_hyperclique(h);
    found = w.has_value();
    if (w) j["witness"] = *w;
  } else if (kind == "foursum") {
    if (files.size() != 4) throw MagmaError(Err::ArityMismatch, "need four lists");
    std::array<std::vector<long long>, 4> bs{
        detect::load_intlist(slurp(files[0])), detect::load_intlist(slurp(files[1])),
        detect::load_intlist(slurp(files[2])), detect::load_intlist(slurp(files[3]))};
    auto w = detect::detect_foursum(bs);
    found = w.has_value();
    if (w) j["witness"] = {(*w)[0], (*w)[1], (*w)[2], (*w)[3]};
  } else {
    std::cerr << "unknown detect kind: " << kind << "\n";
    return 2;
  }
  j["found"] = found;
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else if (found) {
    std::cout << "found " << j["witness"].dump() << "\n";
  } else {
    std::cout << "none\n";
  }
  return found ? 1 : 0;
}

int cmd_generate(const std::string& reduction, const std::vector<std::string>& inputs,
                 const std::string& outdir, int family, uint64_t seed, int trials, int k,
                 int q, long long delta_range) {
  namespace fs = std::filesystem;
  fs::create_directories(outdir);
  json manifest;
  manifest["reduction"] = reduction;
  manifest["seed"] = seed;
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    spit(outdir + "/" + name, text);
    written.push_back(name);
  };

  if (reduction == "triangle-to-dist") {
    auto adj = detect::load_bitmat(slurp(inputs.at(0)));
    emit("structure.magma", save_structure(reduce::triangle_to_distributivity(adj)));
    manifest["identity"] = "a*(b+c) = (a*b)+(a*c)";
  } else if (reduction == "zt-to-ctic" || reduction == "zt-to-count") {
    auto tri = detect::load_tripartite(slurp(inputs.at(0)));
    auto g = reduce::graph_from_tripartite(tri);
    if (reduction == "zt-to-ctic") {
      auto inst = reduce::zero_triangle_to_constant_identity(g);
      emit("structure.magma", save_structure(inst.s));
      manifest["identity"] = to_string(inst.id);
      manifest["witness_map"] = inst.witness_map;
      manifest["set_size"] = inst.s.n;
    } else {
      auto s = reduce::zero_triangle_to_counting(g);
      emit("structure.magma", save_structure(s));
      manifest["set_size"] = s.n;
    }
  } else if (reduction == "behrend") {
    long long n = std::stoll(inputs.at(0));
    auto part = reduce::behrend_partition(n, q);
    for (size_t i = 0; i < part.classes.size(); ++i)
      emit("class" + std::to_string(i) + ".intset", detect::save_intset(part.classes[i]));
    manifest["classes"] = part.classes.size();
  } else if (reduction == "colorize-kap") {
    auto a = detect::load_intset(slurp(inputs.at(0)));
    auto insts = reduce::colorize_kap(a, k, trials, seed);
    for (size_t t = 0; t < insts.size(); ++t)
      for (int i = 0; i < k; ++i)
        emit("trial" + std::to_string(t) + "_color" + std::to_string(i) + ".intset",
             detect::save_intset(insts[t][i]));
    manifest["trials"] = trials;
    manifest["per_trial_hit_rate"] = "any fixed non-trivial k-AP survives a trial w.p. >= k^-k";
  } else if (reduction == "mono-kap") {
    std::vector<detect::IntSet> as;
    for (const auto& f : inputs) as.push_back(detect::load_intset(slurp(f)));
    auto sets = reduce::monochromatize_kap(as, q);
    for (size_t i = 0; i < sets.size(); ++i)
      emit("candidate" + std::to_string(i) + ".intset", detect::save_intset(sets[i]));
    manifest["candidates"] = sets.size();
  } else if (reduction == "4ap-to-square" || reduction == "4ap-to-t") {
    if (inputs.size() != 4) throw MagmaError(Err::ArityMismatch, "need four intsets");
    std::array<detect::IntSet, 4> as{
        detect::load_intset(slurp(inputs[0])), detect::load_intset(slurp(inputs[1])),
        detect::load_intset(slurp(inputs[2])), detect::load_intset(slurp(inputs[3]))};
    reduce::WindowConfig wc;
    if (delta_range >= 0) {
      wc.delta_lo = -delta_range;
      wc.delta_hi = delta_range;
    }
    auto insts = reduction == "4ap-to-square" ? reduce::fourap_to_square(as, wc)
                                              : reduce::fourap_to_T(as, wc);
    if (insts.instances.size() * 4 > 10000)
      throw MagmaError(Err::InvalidSize, "too many instances to write; narrow --delta-range");
    for (size_t d = 0; d < insts.instances.size(); ++d)
      for (int i = 0; i < 4; ++i)
        emit("delta" + std::to_string(insts.deltas[d]) + "_m" + std::to_string(i + 1) + ".bitmat",
             detect::save_bitmat(insts.instances[d][i]));
    manifest["N"] = insts.N;
    manifest["deltas"] = insts.deltas;
  } else if (reduction == "square-to-id" || reduction == "t-to-id") {
    if (inputs.size() != 4) throw MagmaError(Err::ArityMismatch, "need four bitmats");
    std::array<detect::BinaryMatrix, 4> ms{
        detect::load_bitmat(slurp(inputs[0])), detect::load_bitmat(slurp(inputs[1])),
        detect::load_bitmat(slurp(inputs[2])), detect::load_bitmat(slurp(inputs[3]))};
    auto inst = reduction == "square-to-id" ? reduce::square_to_identity(ms, family)
                                            : reduce::T_to_identity(ms, family);
    emit("structure.magma", save_structure(inst.s));
    manifest["identity"] = to_string(inst.id);
    manifest["family"] = inst.family;
    manifest["witness_map"] = inst.witness_map;
  } else if (reduction == "squarefree") {
    long long n = std::stoll(inputs.at(0));
    auto mats = reduce::squarefree_matrices(n, q);
    for (size_t i = 0; i < mats.size(); ++i)
      emit("sfree" + std::to_string(i) + ".bitmat", detect::save_bitmat(mats[i]));
    manifest["count"] = mats.size();
  } else if (reduction == "ap-to-hyperclique") {
    std::vector<detect::IntSet> as;
    for (const auto& f : inputs) as.push_back(detect::load_intset(slurp(f)));
    reduce::HypercliqueConfig hc;
    hc.k = (int)as.size();
    auto h = reduce::ap_to_hyperclique(as, hc);
    emit("instance.hypergraph", detect::save_hypergraph(h));
    manifest["part_size"] = h.parts.at(0).size();
    manifest["edges"] = h.edge_count();
  } else if (reduction == "4ap-to-4sum") {
    if (inputs.size() != 4) throw MagmaError(Err::ArityMismatch, "need four intsets");
    std::array<detect::IntSet, 4> as{
        detect::load_intset(slurp(inputs[0])), detect::load_intset(slurp(inputs[1])),
        detect::load_intset(slurp(inputs[2])), detect::load_intset(slurp(inputs[3]))};
    auto lists = reduce::fourap_to_foursum(as);
    for (int i = 0; i < 4; ++i)
      emit("b" + std::to_string(i + 1) + ".intlist", detect::save_intlist(lists[i]));
  } else if (reduction == "subexpr-embed") {
    Structure s = load_structure(slurp(inputs.at(0)));
    ExprPtr f = parse_expression(inputs.at(1), s.op_names());
    auto [emb, expr] = reduce::subexpression_embedding(s, f);
    emit("structure.magma", save_structure(emb));
    manifest["expression"] = to_string(expr);
    manifest["set_size"] = emb.n;
  } else {
    std::cerr << "unknown reduction: " << reduction << "\n";
    return 2;
  }
  manifest["files"] = written;
  spit(outdir + "/manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << written.size() << " file(s) + manifest.json to " << outdir << "\n";
  return 0;
}

int cmd_bench(const std::string& suite, std::vector<long long> sizes, uint64_t seed,
              bool as_json) {
  if (sizes.empty()) sizes = {256, 512, 1024};
  FieldConfig cfg;
  cfg.seed = seed;
  std::vector<std::pair<long long, double>> pts;
  json rows = json::array();
  for (long long n : sizes) {
    Structure s = make_zn((int)n, true);
    Identity assoc = parse_identity("(a+b)+c = a+(b+c)", s.op_names());
    Identity dist = parse_identity("a*(b+c) = (a*b)+(a*c)", s.op_names());
    Timer t;
    double serial_ms = -1;
    bool holds = true;
    if (suite == "quadratic") {
      holds = verify_identity(s, assoc, cfg).holds;
    } else if (suite == "matrix") {
      holds = verify_identity(s, dist, cfg).holds;
    } else if (suite == "cubic") {
      holds = brute_force_verify(s, dist).holds;
      if (n <= 512) {
        Timer ts;
        (void)brute_force_verify_serial(s, dist);
        serial_ms = ts.ms();
      }
    } else if (suite == "freivalds") {
      holds = freivalds_distributivity(s, cfg).holds;
    } else {
      std::cerr << "unknown suite: " << suite << "\n";
      return 2;
    }
    double wall = t.ms() - (serial_ms > 0 ? serial_ms : 0);
    pts.push_back({n, wall});
    json row;
    row["n"] = n;
    row["wall_time_ms"] = wall;
    row["verdict"] = holds ? "holds" : "fails";
    if (serial_ms >= 0) row["serial_ms"] = serial_ms;
    rows.push_back(row);
    if (!as_json) {
      std::cout << "n=" << n << "  " << wall << " ms";
      if (serial_ms >= 0) std::cout << "  (serial " << serial_ms << " ms)";
      std::cout << "  " << (holds ? "holds" : "fails") << "\n";
    }
  }
  double slope = fit_slope(pts);
  if (as_json) {
    json j;
    j["command"] = "bench";
    j["suite"] = suite;
    j["seed"] = seed;
    j["rows"] = rows;
    j["loglog_slope"] = slope;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "fitted log-log slope: " << slope << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-structure identity verification and reduction toolkit"};
  app.require_subcommand(1);
  uint64_t seed = default_seed();
  int threads = 0;

  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  // verify
  auto* verify = app.add_subcommand("verify", "verify an identity on a structure");
  std::string vfile, videntity, vengine = "auto";
  int vtrials = 2;
  bool vjson = false, vwitness = false;
  verify->add_option("file", vfile, "structure file")->required();
  verify->add_option("--identity", videntity, "identity text")->required();
  verify->add_option("--engine", vengine, "auto|brute|pit|freivalds");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--trials", vtrials, "PIT repetitions");
  verify->add_flag("--json", vjson, "machine-readable report");
  verify->add_flag("--witness", vwitness, "run a cubic witness search after a PIT failure");

  // classify
  auto* classify = app.add_subcommand("classify", "print the regime of an identity");
  std::string cidentity;
  bool cjson = false;
  classify->add_option("--identity", cidentity, "identity text")->required();
  classify->add_flag("--json", cjson, "machine-readable report");

  // check-field / check-ring
  auto* cf = app.add_subcommand("check-field", "decide whether (S,+,*) is a field");
  std::string cffile;
  bool cfjson = false;
  cf->add_option("file", cffile)->required();
  cf->add_flag("--json", cfjson);

  auto* cr = app.add_subcommand("check-ring", "decide whether (S,+,*) is a ring");
  std::string crfile;
  bool crjson = false, crunital = false;
  cr->add_option("file", crfile)->required();
  cr->add_flag("--require-unital", crunital, "require a multiplicative identity");
  cr->add_option("--seed", seed, "random seed");
  cr->add_flag("--json", crjson);

  // detect
  auto* det = app.add_subcommand("detect", "run a brute-force detector");
  std::string dkind;
  std::vector<std::string> dfiles;
  int dk = 4;
  bool djson = false;
  det->add_option("kind", dkind,
                  "kap|multikap|square|multisquare|t|triangle|zerotriangle|hyperclique|foursum")
      ->required();
  det->add_option("files", dfiles, "instance file(s)")->required();
  det->add_option("--k", dk, "progression length for kap");
  det->add_flag("--json", djson);

  // generate
  auto* gen = app.add_subcommand("generate", "run a reduction and write its instances");
  std::string greduction, goutdir = ".";
  std::vector<std::string> ginputs;
  int gfamily = 1, gtrials = 8, gk = 4, gq = 16;
  long long gdelta = -1;
  gen->add_option("reduction", greduction,
                  "triangle-to-dist|zt-to-ctic|zt-to-count|behrend|colorize-kap|mono-kap|"
                  "4ap-to-square|4ap-to-t|square-to-id|t-to-id|squarefree|ap-to-hyperclique|"
                  "4ap-to-4sum|subexpr-embed")
      ->required();
  gen->add_option("inputs", ginputs, "input file(s) or literals");
  gen->add_option("-o,--out", goutdir, "output directory");
  gen->add_option("--family", gfamily, "identity family 1..6");
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--trials", gtrials, "trials for colorize-kap");
  gen->add_option("--k", gk, "progression length");
  gen->add_option("--q", gq, "digit base for Behrend classes");
  gen->add_option("--delta-range", gdelta, "override the offset window to [-c, c]");

  // count
  auto* cnt = app.add_subcommand("count", "count distributive triples");
  std::string cntfile;
  bool cntjson = false;
  cnt->add_option("file", cntfile)->required();
  cnt->add_flag("--json", cntjson);

  // bench
  auto* bench = app.add_subcommand("bench", "time a verification engine over sizes");
  std::string bsuite;
  std::string bsizes = "256,512,1024";
  bool bjson = false;
  bench->add_option("suite", bsuite, "quadratic|matrix|cubic|freivalds")->required();
  bench->add_option("--sizes", bsizes, "comma-separated ascending sizes");
  bench->add_option("--seed", seed, "random seed");
  bench->add_flag("--json", bjson);

  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (verify->parsed())
      return cmd_verify(vfile, videntity, vengine, seed, vtrials, vjson, vwitness);
    if (classify->parsed()) {
      Identity id = parse_identity(cidentity, {});
      std::string regime;
      try {
        regime = regime_name(classify_identity(id));
      } catch (const MagmaError& e) {
        if (e.kind != Err::SubexpressionPair) throw;
        regime = "subexpression-pair";
      }
      if (cjson) {
        json j;
        j["command"] = "classify";
        j["identity"] = to_string(id);
        j["regime"] = regime;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << regime << "\n";
      }
      return 0;
    }
    if (cf->parsed()) {
      Structure s = load_structure(slurp(cffile));
      auto r = algebra::field_verify(s);
      if (cfjson) {
        json j{{"command", "check-field"}, {"accepted", r.ok}};
        if (!r.ok) j["reason"] = r.reason;
        if (r.unity) j["one"] = *r.unity;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << (r.ok ? "accept: field" : "reject: " + r.reason) << "\n";
      }
      return r.ok ? 0 : 1;
    }
    if (cr->parsed()) {
      Structure s = load_structure(slurp(crfile));
      FieldConfig cfg;
      cfg.seed = seed;
      auto r = algebra::ring_verify(s, cfg, crunital);
      if (crjson) {
        json j{{"command", "check-ring"}, {"accepted", r.ok}, {"err_bound", r.err_bound}};
        if (!r.ok) j["reason"] = r.reason;
        if (r.unity) j["one"] = *r.unity;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << (r.ok ? "accept: ring" : "reject: " + r.reason);
        if (r.ok && r.unity) std::cout << " (unital, 1=" << *r.unity << ")";
        std::cout << "\n";
      }
      return r.ok ? 0 : 1;
    }
    if (det->parsed()) return cmd_detect(dkind, dfiles, dk, djson);
    if (gen->parsed())
      return cmd_generate(greduction, ginputs, goutdir, gfamily, seed, gtrials, gk, gq, gdelta);
    if (cnt->parsed()) {
      Structure s = load_structure(slurp(cntfile));
      long long c = count_distributive_triples(s);
      if (cntjson) {
        json j{{"command", "count"}, {"distributive_triples", c}, {"n", s.n}};
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << c << "\n";
      }
      return 0;
    }
    if (bench->parsed()) {
      std::vector<long long> sizes;
      std::stringstream ss(bsizes);
      std::string tok;
      while (std::getline(ss, tok, ',')) sizes.push_back(std::stoll(tok));
      return cmd_bench(bsuite, sizes, seed, bjson);
    }
  } catch (const MagmaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
