#include <catch_amalgamated.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "wavenorm/commands.hpp"
#include "wavenorm/config.hpp"
#include "wavenorm/error.hpp"

using namespace wavenorm;
namespace fs = std::filesystem;

namespace {

const char* kGaussian2d = R"([run]
dimension = 2
[u0]
kind = zero
[u1]
kind = gaussian
sigma = 1
amplitude = 1
[samples]
count = 24
[grid]
half_length = 64
points = 512
[local_energy]
R = 5
times = 10, 20, 30, 40
)";

const char* kBadDelta = "[u0]\nkind = zero\n[u1]\nkind = zero\n[constants]\ndelta0 = 1.5\n";

class Scratch {
public:
  Scratch() : root_(fs::temp_directory_path() / fmt::format("wavenorm_cli_{}", ::getpid())) {
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  ~Scratch() { fs::remove_all(root_); }

  std::string file(const std::string& name, const std::string& text) const {
    const auto p = root_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string dir(const std::string& name) const { return (root_ / name).string(); }

private:
  fs::path root_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::string& cmd, CommandOptions opt) {
  std::ostringstream out, err;
  Run r;
  r.code = run_command(cmd, opt, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

CommandOptions with(const std::string& config, const std::string& out_dir, unsigned threads = 1) {
  CommandOptions o;
  o.config_path = config;
  o.out_dir = out_dir;
  o.threads = threads;
  return o;
}

// Both profile sections are required; snippets that set u1 supply their own.
std::string config_error(const std::string& snippet) {
  std::string text = "[u0]\nkind = zero\n";
  if (snippet.find("[u1]") == std::string::npos) text += "[u1]\nkind = zero\n";
  std::istringstream in(text + snippet);
  try {
    parse_config(in);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

int exit_status(const std::string& cmd) {
  const int s = std::system(cmd.c_str());
  return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

std::string cli() {
  const char* p = std::getenv("WAVENORM_CLI");
  return p ? p : "";
}

}  // namespace

TEST_CASE("the embedded default config parses and describes the example") {
  std::istringstream in(default_config_text());
  const auto c = parse_config(in);
  CHECK(c.dimension == 1);
  CHECK(c.profiles.u0.is_zero());
  CHECK(c.samples.start == 1e2);
  CHECK(c.samples.stop == 1e5);
  CHECK(c.local_energy.times.size() == 10);
}

TEST_CASE("config errors name the offending key") {
  CHECK_THAT(config_error("[constants]\ndelta0 = 1.5\n"), Catch::Matchers::ContainsSubstring("constants.delta0"));
  CHECK_THAT(config_error("[run]\ndimension = 3\n"), Catch::Matchers::ContainsSubstring("run.dimension"));
  CHECK_THAT(config_error("[samples]\ncount = many\n"), Catch::Matchers::ContainsSubstring("samples.count"));
  CHECK_THAT(config_error("[u1]\nkind = gaussian\nsigma = 1\nwidth = 2\n"),
             Catch::Matchers::ContainsSubstring("u1.width"));
  CHECK_THAT(config_error("[u1]\nkind = sphere\n"), Catch::Matchers::ContainsSubstring("u1.kind"));
  CHECK_THAT(config_error("[grid]\npoints = 1000\n"), Catch::Matchers::ContainsSubstring("grid.points"));
  CHECK_THAT(config_error("[quadrature]\nmax_panels = 10\n"), Catch::Matchers::ContainsSubstring("quadrature.max_panels"));
  CHECK_THAT(config_error("[local_energy]\nR = 5\ntimes = 4, 10\n"),
             Catch::Matchers::ContainsSubstring("local_energy.times"));
  CHECK_THAT(config_error("[u1]\nkind = polynomial_gaussian\nsigma = 1\nterms = 1:2\n"),
             Catch::Matchers::ContainsSubstring("u1.terms"));
}

TEST_CASE("a corrupted config exits with the config code") {
  Scratch s;
  const auto r = run("verify", with(s.file("bad.ini", kBadDelta), s.dir("out")));
  CHECK(r.code == kExitConfig);
  CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("delta0"));
  CHECK(run("nonsense", {}).code == kExitConfig);
}

TEST_CASE("default verify passes and lists the example value") {
  const auto r = run("verify", {});
  CHECK(r.code == kExitPass);
  CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("77.333333"));
  CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("PASS"));
}

TEST_CASE("zero data passes verification vacuously") {
  Scratch s;
  for (int n : {1, 2}) {
    const auto cfg = s.file("zero.ini", fmt::format("[run]\ndimension = {}\n[u0]\nkind = zero\n[u1]\nkind = zero\n", n));
    const auto r = run("verify", with(cfg, s.dir("out")));
    INFO(r.out << r.err);
    CHECK(r.code == kExitPass);
  }
}

TEST_CASE("rates writes the norm curve, fit and bounds") {
  Scratch s;
  const auto r = run("rates", with(s.file("g.ini", kGaussian2d), s.dir("g")));
  REQUIRE(r.code == kExitPass);
  const auto j = nlohmann::json::parse(slurp(s.dir("g") + "/rate_fit.json"));
  CHECK(j["model_select"]["selected"]["model"] == "log_linear");
  CHECK(j["model_select"]["selected"]["params"]["c1"]["value"].get<double>() > 0.0);

  const auto def = run("rates", with(s.file("d.ini", default_config_text()), s.dir("d")));
  REQUIRE(def.code == kExitPass);
  const auto jd = nlohmann::json::parse(slurp(s.dir("d") + "/rate_fit.json"));
  const double alpha = jd["model_select"]["selected"]["params"]["alpha"]["value"].get<double>();
  CHECK(alpha >= 0.48);
  CHECK(alpha <= 0.52);

  const auto odd = s.file("odd.ini",
                          "[run]\ndimension = 2\n[u0]\nkind = zero\n[u1]\nkind = polynomial_gaussian\n"
                          "sigma = 1\nterms = 1:1:0\n[samples]\ncount = 24\n");
  REQUIRE(run("rates", with(odd, s.dir("odd"))).code == kExitPass);
  const auto jo = nlohmann::json::parse(slurp(s.dir("odd") + "/rate_fit.json"));
  CHECK(jo["model_select"]["selected"]["model"] == "bounded");
}

TEST_CASE("outputs are byte-identical across thread counts") {
  Scratch s;
  const auto cfg = s.file("g.ini", kGaussian2d);
  for (const char* cmd : {"rates", "local-energy", "bounds"}) {
    REQUIRE(run(cmd, with(cfg, s.dir("one"), 1)).code == kExitPass);
    REQUIRE(run(cmd, with(cfg, s.dir("two"), 2)).code == kExitPass);
  }
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(s.dir("one"))) {
    const auto name = e.path().filename().string();
    INFO(name);
    CHECK(slurp(e.path().string()) == slurp(s.dir("two") + "/" + name));
    ++compared;
  }
  CHECK(compared == 5);
}

TEST_CASE("CSV files carry headers and 17 significant digits") {
  Scratch s;
  const auto cfg = s.file("g.ini", kGaussian2d);
  REQUIRE(run("rates", with(cfg, s.dir("o"))).code == kExitPass);
  REQUIRE(run("local-energy", with(cfg, s.dir("o"))).code == kExitPass);
  const std::vector<std::pair<std::string, std::string>> files{
      {"norm_curve.csv", "t,M,method,status"},
      {"bounds.csv", "t,n,actual,lower,upper,term,value,bound,relation,holds"},
      {"local_energy.csv", "t,R,E_R,F,G,energy,morawetz_residual,inequality_slack,M,F_bound,C_assembled,envelope,envelope_fit"},
  };
  for (const auto& [name, header] : files) {
    std::istringstream in(slurp(s.dir("o") + "/" + name));
    std::string line;
    std::getline(in, line);
    CHECK(line == header);
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      std::istringstream fields(line);
      std::string f;
      while (std::getline(fields, f, ',')) {
        char* end = nullptr;
        const double v = std::strtod(f.c_str(), &end);
        if (end != f.c_str() + f.size() || f.empty()) continue;
        INFO(name << ": " << f);
        CHECK(fmt::format("{:.17g}", v) == f);
      }
    }
    CHECK(rows > 0);
  }
}

TEST_CASE("local energy rejects bad times up front and reports K0") {
  Scratch s;
  std::string text = kGaussian2d;
  REQUIRE(run("local-energy", with(s.file("g.ini", text), s.dir("ok"))).code == kExitPass);
  const auto j = nlohmann::json::parse(slurp(s.dir("ok") + "/local_energy.json"));
  CHECK(j["K0"].get<double>() == j["E0"].get<double>());
  CHECK(j["min_inequality_slack"].get<double>() >= 0.0);

  text.replace(text.find("times = 10"), 10, "times = 4");
  auto r = run("local-energy", with(s.file("early.ini", text), s.dir("early")));
  CHECK(r.code == kExitConfig);
  CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("local_energy.times"));

  text = kGaussian2d;
  text.replace(text.find("40\n"), 3, "60\n");
  r = run("local-energy", with(s.file("late.ini", text), s.dir("late")));
  CHECK(r.code == kExitConfig);
  CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("horizon"));
  CHECK_FALSE(fs::exists(s.dir("late") + "/local_energy.csv"));
}

TEST_CASE("the executable maps outcomes to exit codes") {
  const auto exe = cli();
  if (exe.empty()) SKIP("WAVENORM_CLI is not set");
  Scratch s;
  const auto quiet = " >/dev/null 2>&1";
  CHECK(exit_status(exe + " config --print-default" + quiet) == 0);
  CHECK(exit_status(exe + " verify --out " + s.dir("v") + quiet) == 0);
  CHECK(exit_status(exe + " verify --config " + s.file("bad.ini", kBadDelta) + quiet) == 2);
  CHECK(exit_status(exe + " frobnicate" + quiet) == 2);
  CHECK(exit_status(exe + " rates --threads 0" + quiet) == 2);
  CHECK(exit_status(exe + quiet) == 2);
}
