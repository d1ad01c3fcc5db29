#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rnd/config.hpp"
#include "rnd/csv.hpp"
#include "rnd/estimator.hpp"
#include "rnd/rng.hpp"

using namespace rnd;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("rnd_io_test_" + name);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

RatioModel sample_model(const KernelSpec& spec) {
  RandomStream stream(404);
  RatioModel model;
  model.kernel = spec;
  model.alpha = 1.0 / 3.0;
  model.p_centers.resize(4, spec.dim);
  model.q_centers.resize(3, spec.dim);
  for (Index i = 0; i < model.p_centers.size(); ++i)
    model.p_centers.data()[i] = stream.next_normal() * 0.5;
  for (Index i = 0; i < model.q_centers.size(); ++i)
    model.q_centers.data()[i] = stream.next_normal() * 0.5;
  model.c.resize(4);
  model.c << 1.0 / 3.0, -2.0 / 7.0, 0.125, 3.0303e-13;
  model.c_prime = -1.0 / 81.0;
  model.n_full = 40;
  model.m_full = 30;
  model.mode = FitMode::nystrom;
  return model;
}

bool models_bitwise_equal(const RatioModel& a, const RatioModel& b) {
  return a.kernel == b.kernel && a.alpha == b.alpha && a.p_centers == b.p_centers &&
         a.q_centers == b.q_centers && a.c == b.c && a.c_prime == b.c_prime &&
         a.n_full == b.n_full && a.m_full == b.m_full && a.mode == b.mode;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("model JSON round-trips bitwise") {
  for (const KernelSpec& spec :
       {KernelSpec::gaussian(2, 0.77), KernelSpec::laplacian(2, 1.3),
        KernelSpec::polynomial(2, 3, 0.5, 25.0)}) {
    const RatioModel model = sample_model(spec);
    const RatioModel back = model_from_json(model_to_json(model));
    CHECK(models_bitwise_equal(model, back));
    // evaluation through the round-tripped model is bitwise identical
    RandomStream stream(505);
    Matrix probes(11, 2);
    for (Index i = 0; i < probes.size(); ++i) probes.data()[i] = stream.next_normal();
    const Sample t{probes, SampleLabel::p};
    const Vector before = evaluate(model, t);
    const Vector after = evaluate(back, t);
    CHECK(before == after);
  }
}

TEST_CASE("model save/load is idempotent on disk") {
  const RatioModel model = sample_model(KernelSpec::gaussian(2, 0.9));
  const auto path = temp_path("model.json");
  save_model(model, path.string());
  const RatioModel loaded = load_model(path.string());
  CHECK(models_bitwise_equal(model, loaded));
  const auto path2 = temp_path("model2.json");
  save_model(loaded, path2.string());
  std::ifstream a(path), b(path2);
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
  CHECK_THROWS_AS(load_model((temp_path("missing.json")).string()), std::runtime_error);
}

TEST_CASE("model JSON rejects malformed documents") {
  const RatioModel model = sample_model(KernelSpec::gaussian(2, 0.9));
  const std::string good = model_to_json(model);

  CHECK_THROWS_AS(model_from_json("not json at all"), std::runtime_error);
  CHECK_THROWS_AS(model_from_json("{}"), std::runtime_error);

  std::string bad_version = good;
  bad_version.replace(bad_version.find("\"format_version\": 1"),
                      std::string("\"format_version\": 1").size(), "\"format_version\": 2");
  CHECK_THROWS_AS(model_from_json(bad_version), std::runtime_error);

  std::string bad_mode = good;
  bad_mode.replace(bad_mode.find("\"nystrom\""), 9, "\"sketchy\"");
  CHECK_THROWS_AS(model_from_json(bad_mode), std::runtime_error);

  // coefficient count mismatch: drop one entry from c
  RatioModel short_c = model;
  short_c.c = model.c.head(3);
  CHECK_THROWS_AS(model_from_json(model_to_json(short_c)), std::runtime_error);

  RatioModel bad_alpha = model;
  bad_alpha.alpha = 0.0;
  CHECK_THROWS_AS(model_from_json(model_to_json(bad_alpha)), std::runtime_error);
}

TEST_CASE("csv_num reproduces every double bit for bit") {
  for (double v : {1.0 / 3.0, 0.1, -3.141592653589793, 1e-308, 1.7976931348623157e308,
                   123456789.123456789, -0.0, 2.2250738585072014e-308}) {
    const std::string text = csv_num(v);
    const double back = std::strtod(text.c_str(), nullptr);
    CHECK(std::memcmp(&back, &v, sizeof v) == 0);
  }
}

TEST_CASE("csv reading handles headers, CRLF and raggedness") {
  const auto path = temp_path("matrix.csv");

  write_file(path, "x,y\n1,2\n3,4.5\n");
  Matrix m = read_csv_matrix(path.string());
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 2);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(1, 1) == 4.5);

  // headerless numeric content: the first row is data
  write_file(path, "7,8\n9,10\n");
  m = read_csv_matrix(path.string());
  CHECK(m.rows() == 2);
  CHECK(m(0, 0) == 7.0);

  // CRLF endings are tolerated
  write_file(path, "x\r\n1.5\r\n-2.5\r\n");
  m = read_csv_matrix(path.string());
  CHECK(m.rows() == 2);
  CHECK(m(1, 0) == -2.5);

  write_file(path, "x,y\n1,2\n3\n");
  CHECK_THROWS_AS(read_csv_matrix(path.string()), std::runtime_error);

  write_file(path, "x,y\n1,2\n3,oops\n");
  CHECK_THROWS_AS(read_csv_matrix(path.string()), std::runtime_error);

  write_file(path, "x,y\n");
  CHECK_THROWS_AS(read_csv_matrix(path.string()), std::runtime_error);

  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_csv_matrix(path.string()), std::runtime_error);
}

TEST_CASE("csv writing round-trips through reading") {
  const auto path = temp_path("roundtrip.csv");
  RandomStream stream(99);
  Matrix m(5, 3);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = stream.next_normal() * 1e3;
  {
    std::ofstream out(path, std::ios::binary);
    std::vector<std::vector<std::string>> rows;
    for (Index i = 0; i < m.rows(); ++i) {
      std::vector<std::string> row;
      for (Index j = 0; j < m.cols(); ++j) row.push_back(csv_num(m(i, j)));
      rows.push_back(std::move(row));
    }
    write_csv(out, {"a", "b", "c"}, rows);
  }
  const Matrix back = read_csv_matrix(path.string());
  CHECK(back == m);
  std::filesystem::remove(path);

  std::ostringstream sink;
  const std::vector<std::string> two_headers = {"a", "b"};
  const std::vector<std::vector<std::string>> one_cell = {{"1"}};
  CHECK_THROWS_AS(write_csv(sink, two_headers, one_cell), std::logic_error);
}

TEST_CASE("config files populate every section") {
  const auto path = temp_path("config.toml");
  write_file(path,
             "# reference configuration\n"
             "[kernel]\n"
             "family = laplacian\n"
             "bandwidth = 0.7  # inline comment\n"
             "[pair]\n"
             "sigma_p = 1.1\n"
             "sigma_q = 0.9\n"
             "d = 2\n"
             "[selection]\n"
             "s = 0.4\n"
             "r = 0.3\n"
             "delta = 0.2\n"
             "c_sub = 2.5\n"
             "regime = out_of_rkhs\n"
             "[grid]\n"
             "sizes = 10, 20 30\n"
             "seeds = 4 5,6\n"
             "[bench]\n"
             "nystrom_sizes = 100 200\n"
             "full_sizes = 50\n"
             "[run]\n"
             "mc_points = 1234\n"
             "capacity_probe = 77\n"
             "subsample = 0.25\n"
             "mode = full\n"
             "seed = 42\n"
             "out = results\n"
             "effdim_grid = 9\n");
  const RunConfig cfg = load_config(path.string());
  CHECK(cfg.kernel_family == KernelFamily::laplacian);
  CHECK(cfg.bandwidth == 0.7);
  CHECK(cfg.sigma_p == 1.1);
  CHECK(cfg.sigma_q == 0.9);
  CHECK(cfg.d == 2);
  CHECK(cfg.policy.indices.s == 0.4);
  CHECK(cfg.policy.indices.r == 0.3);
  CHECK(cfg.policy.delta == 0.2);
  CHECK(cfg.policy.c_subsample == 2.5);
  CHECK(cfg.policy.indices.regime == Regime::out_of_rkhs);
  const std::vector<Index> want_sizes = {10, 20, 30};
  const std::vector<std::uint64_t> want_seeds = {4, 5, 6};
  const std::vector<Index> want_nystrom = {100, 200};
  const std::vector<Index> want_full = {50};
  CHECK(cfg.grid_sizes == want_sizes);
  CHECK(cfg.seeds == want_seeds);
  CHECK(cfg.bench_nystrom_sizes == want_nystrom);
  CHECK(cfg.bench_full_sizes == want_full);
  CHECK(cfg.mc_points == 1234);
  CHECK(cfg.capacity_probe == 77);
  CHECK(cfg.subsample.kind == SubsampleRule::Kind::fraction);
  CHECK(cfg.subsample.fraction == 0.25);
  CHECK(cfg.mode == "full");
  CHECK(cfg.seed == 42);
  CHECK(cfg.out_dir == "results");
  CHECK(cfg.effdim_grid == 9);
  // derived objects
  const KernelSpec spec = cfg.kernel();
  CHECK(spec.family == KernelFamily::laplacian);
  CHECK(spec.bandwidth == 0.7);
  CHECK(spec.dim == 2);
  const SyntheticPair pair = cfg.pair();
  CHECK(pair.b0 == doctest::Approx((1.1 / 0.9) * (1.1 / 0.9)).epsilon(1e-12));
  std::filesystem::remove(path);
}

TEST_CASE("config errors are loud") {
  const auto path = temp_path("bad.toml");

  write_file(path, "[kernel]\nflavor = vanilla\n");
  CHECK_THROWS_WITH_AS(load_config(path.string()),
                       "config: unknown key 'kernel.flavor'", std::invalid_argument);

  write_file(path, "[kernel\nbandwidth = 1\n");
  CHECK_THROWS_AS(load_config(path.string()), std::runtime_error);

  write_file(path, "just some text\n");
  CHECK_THROWS_AS(load_config(path.string()), std::runtime_error);

  write_file(path, "[kernel]\nbandwidth =\n");
  CHECK_THROWS_AS(load_config(path.string()), std::runtime_error);

  write_file(path, "[kernel]\nbandwidth = wide\n");
  CHECK_THROWS_AS(load_config(path.string()), std::invalid_argument);

  write_file(path, "[run]\nmode = sideways\n");
  CHECK_THROWS_AS(load_config(path.string()), std::invalid_argument);

  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config(path.string()), std::runtime_error);
}

TEST_CASE("subsample rules parse and validate") {
  CHECK(SubsampleRule::parse("auto").kind == SubsampleRule::Kind::automatic);

  const SubsampleRule frac = SubsampleRule::parse("0.5");
  CHECK(frac.kind == SubsampleRule::Kind::fraction);
  CHECK(frac.fraction == 0.5);

  const SubsampleRule fixed = SubsampleRule::parse("128");
  CHECK(fixed.kind == SubsampleRule::Kind::fixed);
  CHECK(fixed.fixed == 128);

  CHECK_THROWS_AS(SubsampleRule::parse("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(SubsampleRule::parse("0.0"), std::invalid_argument);
  CHECK_THROWS_AS(SubsampleRule::parse("0"), std::invalid_argument);
  CHECK_THROWS_AS(SubsampleRule::parse("-3"), std::invalid_argument);
  CHECK_THROWS_AS(SubsampleRule::parse("abc"), std::invalid_argument);
}

}  // TEST_SUITE
