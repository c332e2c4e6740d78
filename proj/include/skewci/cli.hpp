// Batch front end: job configs, the on-disk resolution cache, and report rendering.
#pragma once

#include <fcntl.h>
#include <openssl/evp.h>
#include <sys/file.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dualpowers.hpp"
#include "support.hpp"
#include "validate.hpp"

namespace skewci::cli {

inline constexpr const char* kConfigSchema = "skewci-config/1";
inline constexpr const char* kReportSchema = "skewci-report/1";

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"check",   "resolve",  "betti",   "ext", "hh", "support", "complexity",
                                             "poincare", "perfect", "arc", "selftest-appendix"};
  return c;
}

// Configuration problems: unparseable JSON, unknown commands, bad windows, undefined module names.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WindowParams {
  int cmax = 8;
  long Dmax = 8;
  int hmax = -1;  // automatic
  nlohmann::json to_json() const { return {{"cmax", cmax}, {"Dmax", Dmax}, {"hmax", hmax}}; }
};

struct JobConfig {
  std::string command;
  nlohmann::json ring;  // null only for selftest-appendix
  std::map<std::string, nlohmann::json> modules;
  nlohmann::json M = "k", N = "k";  // module names or inline documents
  WindowParams window;
  int imax = 6;
  int r = 0;
  int bound = 4;
  std::string semantics = "fiber";
  std::string out;
  std::string cache;
};

inline std::pair<int, int> line_col(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline void validate_config(const JobConfig& c) {
  if (std::find(commands().begin(), commands().end(), c.command) == commands().end())
    throw ConfigError("unknown command '" + c.command + "'");
  if (c.window.cmax <= 0 || c.window.Dmax <= 0) throw ConfigError("windows must be positive");
  if (c.window.hmax == 0 || c.window.hmax < -1) throw ConfigError("hmax must be positive");
  if (c.imax <= 0 || c.bound <= 0 || c.r < 0) throw ConfigError("imax and bound must be positive, r nonnegative");
  if (c.semantics != "fiber" && c.semantics != "full") throw ConfigError("semantics must be fiber or full");
  if (c.ring.is_null() && c.command != "selftest-appendix") throw ConfigError("missing ring");
  for (const auto* ref : {&c.M, &c.N})
    if (ref->is_string()) {
      std::string s = ref->get<std::string>();
      if (s != "k" && s != "R" && !c.modules.count(s)) throw ConfigError("module '" + s + "' is not defined");
    }
}

// Applies "c=<int>,D=<int>,h=<int>" (any subset) to the window.
inline void apply_window(WindowParams& w, const std::string& spec) {
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("window entry '" + part + "' is not key=value");
    std::string key = part.substr(0, eq);
    long v;
    try {
      size_t used = 0;
      v = std::stol(part.substr(eq + 1), &used);
      if (used != part.size() - eq - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ConfigError("window value in '" + part + "' is not an integer");
    }
    if (key == "c")
      w.cmax = int(v);
    else if (key == "D")
      w.Dmax = v;
    else if (key == "h")
      w.hmax = int(v);
    else
      throw ConfigError("unknown window key '" + key + "'");
  }
}

inline JobConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [l, c] = line_col(text, e.byte);
    std::string what = e.what();
    throw ConfigError("config parse error at line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + what);
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  JobConfig c;
  try {
    if (j.contains("schema") && j["schema"] != kConfigSchema)
      throw ConfigError("unsupported config schema " + j["schema"].dump());
    c.command = j.value("command", std::string());
    if (j.contains("ring")) c.ring = j["ring"];
    if (j.contains("modules"))
      for (const auto& [k, v] : j["modules"].items()) c.modules[k] = v;
    if (j.contains("M")) c.M = j["M"];
    if (j.contains("N")) c.N = j["N"];
    if (j.contains("window")) {
      const auto& w = j["window"];
      c.window.cmax = w.value("cmax", c.window.cmax);
      c.window.Dmax = w.value("Dmax", c.window.Dmax);
      c.window.hmax = w.value("hmax", c.window.hmax);
    }
    c.imax = j.value("imax", c.imax);
    c.r = j.value("r", c.r);
    c.bound = j.value("bound", c.bound);
    c.semantics = j.value("semantics", c.semantics);
    c.out = j.value("out", std::string());
    c.cache = j.value("cache", std::string());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  }
  return c;
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 || EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

inline nlohmann::json resolution_to_json(const RingSpec& R, const KoszulResolution& K) {
  return {{"P", dge_to_json(R, K.P)}, {"truncation", K.truncation}, {"Dmax", K.Dmax}, {"minimized", K.minimized},
          {"note", K.note}};
}

inline KoszulResolution resolution_from_json(const RingSpec& R, const nlohmann::json& j) {
  KoszulResolution K;
  K.P = dge_from_json(R, j.at("P"));
  K.truncation = j.at("truncation").get<int>();
  K.Dmax = j.at("Dmax").get<long>();
  K.minimized = j.at("minimized").get<bool>();
  K.note = j.at("note").get<std::string>();
  return K;
}

// Serialize then deserialize.
inline DGEModuleData cache_roundtrip(const RingSpec& R, const DGEModuleData& P) {
  return dge_from_json(R, nlohmann::json::parse(dge_to_json(R, P).dump()));
}

// Held for the lifetime of the object; exclusive for writers, shared for readers.
class FileLock {
 public:
  FileLock(const std::filesystem::path& p, bool exclusive) {
    fd_ = ::open(p.c_str(), O_RDWR | O_CREAT, 0644);
    if (fd_ < 0) throw std::runtime_error("cannot open lock file " + p.string());
    if (::flock(fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
      ::close(fd_);
      throw std::runtime_error("cannot lock " + p.string());
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

// Finite Koszul resolutions keyed by the SHA-256 of (ring, module, options). Each entry stores the hash of its
// payload, so corrupted entries are detected and recomputed.
class ResolutionCache {
 public:
  struct Stats {
    int hits = 0, misses = 0, corrupt = 0;
    nlohmann::json to_json() const { return {{"hits", hits}, {"misses", misses}, {"corrupt_recomputed", corrupt}}; }
  };

  explicit ResolutionCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  const Stats& stats() const { return stats_; }
  const std::filesystem::path& dir() const { return dir_; }

  static std::string key(const RingSpec& R, const ModulePresentation& M, const KoszulOptions& opt) {
    nlohmann::json k{{"kind", "finite-koszul-resolution"}, {"version", 1},           {"ring", ring_to_json(R)},
                     {"module", module_to_json(R, M)},     {"Dmax", opt.Dmax},        {"hmax", opt.hmax},
                     {"minimize", opt.minimize},           {"attempts", opt.attempts}};
    return sha256_hex(k.dump());
  }
  std::filesystem::path entry_path(const std::string& k) const { return dir_ / (k + ".json"); }

  KoszulResolution get(const RingSpec& R, const ModulePresentation& M, const KoszulOptions& opt = {}) {
    std::string k = key(R, M, opt);
    auto path = entry_path(k);
    bool exists = false;
    {
      FileLock lock(dir_ / ".lock", false);
      if (std::filesystem::exists(path)) {
        exists = true;
        if (auto K = load(R, path, k)) {
          ++stats_.hits;
          return *K;
        }
      }
    }
    if (exists)
      ++stats_.corrupt;
    else
      ++stats_.misses;
    KoszulResolution K = finite_koszul_resolution(R, M, opt);
    store(R, path, k, K);
    return K;
  }

 private:
  std::filesystem::path dir_;
  Stats stats_;

  static std::optional<KoszulResolution> load(const RingSpec& R, const std::filesystem::path& path, const std::string& k) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      auto j = nlohmann::json::parse(ss.str());
      if (j.at("key") != k) return std::nullopt;
      const auto& payload = j.at("payload");
      if (sha256_hex(payload.dump()) != j.at("payload_sha256").get<std::string>()) return std::nullopt;
      return resolution_from_json(R, payload);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  void store(const RingSpec& R, const std::filesystem::path& path, const std::string& k, const KoszulResolution& K) {
    nlohmann::json payload = resolution_to_json(R, K);
    nlohmann::json entry{{"key", k}, {"payload", payload}, {"payload_sha256", sha256_hex(payload.dump())}};
    FileLock lock(dir_ / ".lock", true);
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << entry.dump();
      if (!out) throw std::runtime_error("cannot write cache entry " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
  }
};

// Rows: cohomological/homological degree; columns: internal degree.
inline std::string render_bigraded(const std::map<std::pair<int, long>, long>& cells, const std::string& corner) {
  if (cells.empty()) return corner + ": all zero in the window\n";
  std::set<int> rows;
  std::set<long> cols;
  for (const auto& [k, v] : cells)
    if (v) {
      rows.insert(k.first);
      cols.insert(k.second);
    }
  if (rows.empty()) return corner + ": all zero in the window\n";
  size_t w = corner.size();
  for (long c : cols) w = std::max(w, std::to_string(c).size());
  for (const auto& [k, v] : cells) w = std::max(w, std::to_string(v).size());
  std::ostringstream os;
  os << std::setw(int(w)) << corner;
  for (long c : cols) os << ' ' << std::setw(int(w)) << c;
  os << '\n';
  for (int r : rows) {
    os << std::setw(int(w)) << r;
    for (long c : cols) {
      auto it = cells.find({r, c});
      long v = it == cells.end() ? 0 : it->second;
      os << ' ' << std::setw(int(w)) << (v ? std::to_string(v) : ".");
    }
    os << '\n';
  }
  return os.str();
}

inline std::string join_longs(const std::vector<long>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

struct RunResult {
  int status = 0;  // 0 ok, 1 failed check or invariant, 2 configuration or validation error
  nlohmann::json report;
  std::string text;
};

namespace detail {

// n = 2 rings with q of orders 1, 2 and 4.
inline std::vector<std::pair<std::string, RingSpec>> appendix_rings() {
  std::vector<std::pair<std::string, RingSpec>> out;
  for (auto [m, a] : std::vector<std::pair<int, int>>{{1, 0}, {2, 1}, {4, 1}}) {
    nlohmann::json j{{"n", 2}, {"m", m}, {"qexp", {{0, a}, {(m - a) % m, 0}}}, {"relations", {"x1^2", "x2^2"}}};
    RingSpec R = ring_from_json(j);
    validate_ring(R);
    out.push_back({"q of order " + std::to_string(m), R});
  }
  return out;
}

inline nlohmann::json selftest(const std::vector<std::pair<std::string, RingSpec>>& rings, int bound, bool& ok,
                               std::string& text) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [name, R] : rings) {
    AppendixReport a = verify_appendix(R, bound);
    PhiReport p = verify_phi(R, bound);
    ok = ok && a.ok && p.ok;
    arr.push_back({{"ring", name}, {"appendix", a.to_json()}, {"phi", p.to_json()}});
    text += name + ": dual powers " + (a.ok ? "pass" : "FAIL " + a.failure) + " (" + std::to_string(a.checks) +
            " checks), Phi " + (p.ok ? "pass" : "FAIL " + p.failure) + " (" + std::to_string(p.checks) + " checks)\n";
  }
  return arr;
}

}  // namespace detail

inline RunResult run(const JobConfig& cfg) {
  RunResult res;
  nlohmann::json& rep = res.report;
  rep["schema"] = kReportSchema;
  rep["command"] = cfg.command;
  rep["window"] = cfg.window.to_json();
  rep["semantics"] = cfg.semantics;
  std::ostringstream txt;
  auto fail = [&](int status, const std::string& msg) {
    res.status = status;
    rep["status"] = "error";
    rep["error"] = msg;
    res.text = txt.str() + "error: " + msg + "\n";
    return res;
  };
  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    return fail(2, e.what());
  }

  if (cfg.command == "selftest-appendix" && cfg.ring.is_null()) {
    bool ok = true;
    std::string t;
    rep["bound"] = cfg.bound;
    rep["result"] = detail::selftest(detail::appendix_rings(), cfg.bound, ok, t);
    rep["status"] = ok ? "ok" : "failed";
    res.status = ok ? 0 : 1;
    res.text = t;
    return res;
  }

  RingSpec R;
  ValidationReport vr;
  try {
    R = ring_from_json(cfg.ring);
    vr = validate_ring(R);
  } catch (const std::exception& e) {
    return fail(2, std::string("ring: ") + e.what());
  }
  rep["ring"] = ring_to_json(R);
  if (!vr.ok) {
    rep["validation"] = vr.to_json();
    return fail(cfg.command == "check" ? 1 : 2, "ring validation failed: " + vr.error);
  }

  auto module = [&](const nlohmann::json& ref, const std::string& role) {
    if (ref.is_string()) {
      std::string s = ref.get<std::string>();
      if (s == "k" || s == "R") return module_from_json(R, ref, s);
      return module_from_json(R, cfg.modules.at(s), s);
    }
    return module_from_json(R, ref, role);
  };

  std::unique_ptr<ResolutionCache> cache;
  if (!cfg.cache.empty()) cache = std::make_unique<ResolutionCache>(cfg.cache);
  KoszulOptions kopt;
  kopt.hmax = cfg.window.hmax;
  auto resolve = [&](const ModulePresentation& M) {
    return cache ? cache->get(R, M, kopt) : finite_koszul_resolution(R, M, kopt);
  };
  SupportEngine engine(R, {cfg.window.cmax, cfg.window.Dmax});
  engine.resolver = resolve;

  try {
    const std::string& cmd = cfg.command;
    nlohmann::json out;
    bool ok = true;
    if (cmd == "check") {
      out = vr.to_json();
      out["t"] = compute_t(R);
      out["c"] = R.c();
      txt << "ring ok: n=" << R.n << " c=" << R.c() << " m=" << R.m << " t=" << compute_t(R) << "\n";
      txt << "Hilbert function verified through degree " << vr.cutoff << "\n";
    } else if (cmd == "selftest-appendix") {
      std::string t;
      out = detail::selftest({{"configured ring", R}}, cfg.bound, ok, t);
      rep["bound"] = cfg.bound;
      txt << t;
    } else if (cmd == "hh") {
      HHReport h = braided_hh(R, cfg.window.cmax, cfg.window.Dmax);
      out = h.to_json();
      ok = h.match;
      txt << "H(E_E) against R[chi_1..chi_c] through degree " << cfg.window.cmax << ", internal degree "
          << cfg.window.Dmax << ": " << (h.match ? "match" : "MISMATCH") << "\n";
      txt << render_bigraded(h.table.dims, "i\\j");
    } else {
      ModulePresentation M = module(cfg.M, "M");
      rep["M"] = {{"name", M.name}, {"presentation", module_to_json(R, M)}};
      bool needs_n = cmd == "ext" || cmd == "support" || cmd == "complexity" || cmd == "poincare";
      ModulePresentation N;
      if (needs_n) {
        N = module(cfg.N, "N");
        rep["N"] = {{"name", N.name}, {"presentation", module_to_json(R, N)}};
      }
      if (cmd == "resolve") {
        KoszulResolution K = resolve(M);
        std::string dge = check_dge(R, K.P), exact = certify_exact(R, K.P);
        ok = dge.empty() && exact.empty();
        out = resolution_to_json(R, K);
        out["ranks"] = K.P.ranks();
        out["dge_check"] = dge.empty() ? "ok" : dge;
        out["exactness"] = exact.empty() ? "certified" : exact;
        auto rt = cache_roundtrip(R, K.P);
        out["roundtrip_identical"] = dge_to_json(R, rt).dump() == dge_to_json(R, K.P).dump();
        txt << "finite Koszul resolution of " << M.name << ": ranks";
        for (int r : K.P.ranks()) txt << ' ' << r;
        txt << ", truncation " << K.truncation << (K.minimized ? ", minimized" : "") << "\n";
        txt << "DG E-module relations: " << (dge.empty() ? "ok" : dge) << "; exactness: "
            << (exact.empty() ? "certified" : exact) << "\n";
      } else if (cmd == "betti") {
        int band = 1;
        for (int x : R.d) band = std::max(band, x);
        for (int x : R.df) band = std::max(band, x);
        long D = std::max(cfg.window.Dmax, M.max_ideg(R) + long(cfg.imax + 1) * band);
        BettiTable B = minimal_R_resolution(R, M, cfg.imax, D);
        out = B.to_json();
        std::map<std::pair<int, long>, long> cells;
        for (const auto& [i, row] : B.table)
          for (const auto& [d, b] : row) cells[{i, d}] = b;
        txt << "Betti numbers of " << M.name << " (internal degrees <= " << D << "): " << join_longs(B.totals()) << "\n";
        txt << render_bigraded(cells, "i\\j");
      } else if (cmd == "ext") {
        ExtTable T = engine.ext(M, N, 0, cfg.window.cmax, cfg.window.Dmax, true);
        out = T.to_json();
        std::vector<long> tot;
        for (int i = 0; i <= cfg.window.cmax; ++i) tot.push_back(T.total(i));
        out["totals"] = tot;
        txt << "Ext(" << M.name << ", " << N.name << ") totals: " << join_longs(tot) << "\n";
        txt << render_bigraded(T.dims, "i\\j");
      } else if (cmd == "support") {
        SupportReport S = engine.support(M, N, cfg.semantics);
        out = S.to_json();
        txt << "V(" << M.name << ", " << N.name << ") = V" << S.text() << ", dimension " << S.dimension << ", t = " << S.t
            << ", semantics " << S.semantics << "\n";
      } else if (cmd == "complexity") {
        ComplexityReport C = engine.complexity(M, N);
        out = C.to_json();
        ok = C.ok;
        if (C.ok)
          txt << "cx(" << M.name << ", " << N.name << ") = " << C.cx << " (" << C.method << ")\n";
        else
          txt << "complexity undetermined in the window; enlarge c\n";
      } else if (cmd == "poincare") {
        PoincareReport P = engine.poincare(M, N);
        out = P.to_json();
        ok = P.ok;
        if (P.ok)
          txt << "P(" << M.name << ", " << N.name << ") = " << P.text() << " (" << P.method << ")\n";
        else
          txt << "no validated rational form in the window; enlarge c\n";
      } else if (cmd == "perfect") {
        PerfectReport P = engine.is_perfect(M);
        out = P.to_json();
        ok = P.betti_agrees;
        txt << M.name << (P.perfect ? " is perfect" : " is not perfect") << "; Betti tail "
            << (P.betti_agrees ? "agrees" : "DISAGREES") << " (" << join_longs(P.betti) << ")\n";
      } else if (cmd == "arc") {
        if (cfg.window.cmax <= cfg.r) return fail(2, "window c must exceed r");
        ArcReport A = engine.arc_check(M, cfg.r, cfg.window.cmax);
        out = A.to_json();
        ok = A.verdict != "disagreement";
        txt << "arc check for " << M.name << " with r = " << cfg.r << ": " << A.verdict << "\n";
      }
    }
    rep["result"] = out;
    rep["status"] = ok ? "ok" : "failed";
    res.status = ok ? 0 : 1;
  } catch (const std::out_of_range& e) {
    return fail(2, std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return fail(2, e.what());
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
  if (cache) {
    rep["cache"] = cache->stats().to_json();
    rep["cache"]["dir"] = cache->dir().string();
    const auto& s = cache->stats();
    txt << "cache: " << s.hits << " hit(s), " << s.misses << " miss(es), " << s.corrupt << " corrupt entr"
        << (s.corrupt == 1 ? "y" : "ies") << " recomputed\n";
  }
  res.text = txt.str();
  return res;
}

}  // namespace skewci::cli
