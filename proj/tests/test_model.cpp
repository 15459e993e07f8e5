#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bincorr/error.hpp"
#include "bincorr/model.hpp"
#include "bincorr/model_json.hpp"
#include "bincorr/rng.hpp"
#include "oracles.hpp"

using namespace bincorr;

namespace {

constexpr double kTight = 1e-12;

std::vector<ModelSpec> small_specs() {
  std::vector<ModelSpec> specs;
  for (double rho : {0.5, 0.7, 0.95, 1.0}) {
    for (std::size_t n : {1U, 2U, 5U, 9U}) {
      specs.push_back(ModelSpec::parallel(std::vector<double>(n, rho)));
      specs.push_back(ModelSpec::serial_constant(n, rho));
      std::vector<double> z(n, rho);
      z[0] = 0.5;
      specs.push_back(ModelSpec::linear(serial_equivalent_matrix(n), z));
    }
    specs.push_back(ModelSpec::mixed({{rho, rho, rho}, {rho, rho, rho}}));
    specs.push_back(ModelSpec::mixed({{rho, rho}, {rho, rho}, {rho, rho}, {rho, rho}}));
  }
  specs.push_back(ModelSpec::parallel({0.55, 0.9, 0.62, 1.0, 0.75}));
  specs.push_back(ModelSpec::serial({0.8, 0.6, 0.99, 0.51, 0.7}));
  specs.push_back(ModelSpec::mixed({{0.9, 0.6, 0.7}, {0.55, 0.8, 1.0}}));
  specs.push_back(ModelSpec::linear(build_circulant(7, 3), {0.6, 0.2, 0.9, 0.5, 0.33, 0.7, 0.1}));
  return specs;
}

std::vector<double> table_of(const ModelSpec& spec) {
  std::vector<double> t(std::size_t{1} << spec.total());
  for (std::uint64_t x = 0; x < t.size(); ++x) {
    t[x] = pmf(spec, BitVector::from_mask(x, spec.total()));
  }
  return t;
}

}  // namespace

TEST_CASE("pmf examples") {
  CHECK(pmf(ModelSpec::parallel({0.7, 0.7}), BitVector::from_string("00")) ==
        doctest::Approx(0.29).epsilon(kTight));
  CHECK(pmf(ModelSpec::serial_constant(3, 0.7), BitVector::from_string("000")) ==
        doctest::Approx(0.245).epsilon(kTight));

  const auto gen_par = oracle::generative_pmf(ModelSpec::parallel({0.7, 0.7}));
  CHECK(std::abs(static_cast<double>(gen_par[0]) - 0.29) < kTight);
  const auto gen_ser = oracle::generative_pmf(ModelSpec::serial_constant(3, 0.7));
  CHECK(std::abs(static_cast<double>(gen_ser[0]) - 0.245) < kTight);
}

TEST_CASE("linear model with the serial-equivalent matrix reproduces the serial pmf") {
  for (std::size_t n = 1; n <= 10; ++n) {
    for (double rho : {0.6, 0.7, 0.95}) {
      std::vector<double> z(n, rho);
      z[0] = 0.5;
      const auto lin = ModelSpec::linear(serial_equivalent_matrix(n), z);
      const auto ser = ModelSpec::serial_constant(n, rho);
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        REQUIRE(std::abs(pmf_mask(lin, x) - pmf_mask(ser, x)) < kTight);
      }
    }
  }
}

TEST_CASE("pmf matches the generative oracle, sums to one, has uniform marginals") {
  for (const auto& spec : small_specs()) {
    CAPTURE(to_string(spec.kind()));
    CAPTURE(spec.total());
    const auto table = table_of(spec);
    const auto oracle_table = oracle::generative_pmf(spec);
    double sum = 0.0;
    for (std::size_t x = 0; x < table.size(); ++x) {
      REQUIRE(std::abs(table[x] - static_cast<double>(oracle_table[x])) < kTight);
      REQUIRE(std::abs(table[x] - pmf_mask(spec, x)) == 0.0);
      sum += table[x];
    }
    CHECK(std::abs(sum - 1.0) < kTight);
    CHECK(pmf_table(spec) == table);

    const bool expect_uniform = spec.uniform_marginals().value_or(true);
    if (spec.kind() != ModelKind::kLinear || spec.rho(0) == 0.5) {
      const auto mu = oracle::marginals(oracle_table, spec.total());
      for (auto m : mu) CHECK(std::abs(static_cast<double>(m) - 0.5) < kTight);
      CHECK(expect_uniform);
    }
  }
}

TEST_CASE("linear marginal flag reflects the configured noise") {
  const auto uniform = ModelSpec::linear(serial_equivalent_matrix(4), {0.5, 0.7, 0.7, 0.7});
  REQUIRE(uniform.uniform_marginals().has_value());
  CHECK(*uniform.uniform_marginals());
  const auto skewed = ModelSpec::linear(serial_equivalent_matrix(4), {0.7, 0.7, 0.7, 0.7});
  REQUIRE(skewed.uniform_marginals().has_value());
  CHECK_FALSE(*skewed.uniform_marginals());
  const auto big = ModelSpec::linear(serial_equivalent_matrix(13), std::vector<double>(13, 0.7));
  CHECK_FALSE(big.uniform_marginals().has_value());
  CHECK(ModelSpec::parallel({0.7}).uniform_marginals() == std::optional<bool>(true));
}

TEST_CASE("cascade flip probability") {
  const std::vector<double> ones{1.0, 1.0, 1.0};
  CHECK(cascade_flip_prob(ones) == 1.0);
  const std::vector<double> fair{0.5, 0.9, 0.7};
  CHECK(cascade_flip_prob(fair) == 0.5);
  const std::vector<double> two{0.7, 0.7};
  CHECK(cascade_flip_prob(two) == doctest::Approx(0.58).epsilon(kTight));
  CHECK_THROWS_AS((void)cascade_flip_prob(std::vector<double>{}), InvalidSpec);
  CHECK_THROWS_AS((void)cascade_flip_prob(std::vector<double>{1.2}), InvalidSpec);

  // Parity of two independent noise bits, enumerated.
  const double p = 0.7 * 0.7 + 0.3 * 0.3;
  CHECK(std::abs(cascade_flip_prob(two) - p) < kTight);
}

TEST_CASE("conditional pmf") {
  const auto single = ModelSpec::parallel({0.7});
  CHECK(conditional_pmf(single, BitVector::from_string("0"), false) == doctest::Approx(0.7));
  CHECK(conditional_pmf(single, BitVector::from_string("0"), true) == doctest::Approx(0.3));

  for (double first : {1.0, 0.8}) {
    const auto ser = ModelSpec::serial({first, 0.7});
    CHECK(conditional_pmf(ser, BitVector::from_string("00"), false) ==
          doctest::Approx(first * 0.7).epsilon(kTight));
  }

  for (const auto& spec : small_specs()) {
    if (spec.kind() == ModelKind::kLinear) {
      CHECK_THROWS_AS((void)conditional_pmf(spec, BitVector(spec.total()), false), Unsupported);
      continue;
    }
    double s0 = 0.0, s1 = 0.0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << spec.total()); ++x) {
      const auto v = BitVector::from_mask(x, spec.total());
      const double c0 = conditional_pmf(spec, v, false);
      const double c1 = conditional_pmf(spec, v, true);
      s0 += c0;
      s1 += c1;
      REQUIRE(std::abs(pmf(spec, v) - 0.5 * (c0 + c1)) < kTight);
    }
    CHECK(std::abs(s0 - 1.0) < kTight);
    CHECK(std::abs(s1 - 1.0) < kTight);
  }
}

TEST_CASE("structural reductions between models") {
  for (double rho : {0.5, 0.63, 0.7, 0.95, 1.0}) {
    const std::vector<double> chain{0.8, rho, rho, 0.9, rho};
    const auto mixed = ModelSpec::mixed({chain});
    const auto serial = ModelSpec::serial(chain);
    for (std::uint64_t x = 0; x < 32; ++x) REQUIRE(pmf_mask(mixed, x) == doctest::Approx(pmf_mask(serial, x)).epsilon(kTight));

    const auto par = ModelSpec::parallel({1.0, rho});
    const auto ser = ModelSpec::serial({0.6, rho});
    for (std::uint64_t x = 0; x < 4; ++x) REQUIRE(std::abs(pmf_mask(par, x) - pmf_mask(ser, x)) < kTight);
  }
}

TEST_CASE("fully reliable channels give all-equal realizations") {
  for (const auto& spec : {ModelSpec::parallel(std::vector<double>(6, 1.0)),
                           ModelSpec::serial_constant(6, 1.0),
                           ModelSpec::mixed({{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}})}) {
    const auto draws = sample(spec, 9, 2000);
    std::size_t ones = 0;
    for (const auto& x : draws) {
      REQUIRE((x.count() == 0 || x.count() == spec.total()));
      ones += x.count() == 0 ? 0 : 1;
    }
    CHECK(ones > 900);
    CHECK(ones < 1100);
  }
}

TEST_CASE("sampler frequencies agree with the pmf") {
  const std::size_t s = 400000;
  for (const auto& spec : {ModelSpec::parallel({0.7, 0.9, 0.6}), ModelSpec::serial_constant(4, 0.8),
                           ModelSpec::mixed({{0.7, 0.9}, {0.95, 0.6}}),
                           ModelSpec::linear(build_circulant(4, 3), {0.8, 0.3, 0.6, 0.5})}) {
    const auto draws = sample_masks(spec, 21, 0, s);
    std::vector<std::size_t> counts(std::size_t{1} << spec.total(), 0);
    for (auto x : draws) ++counts[x];
    for (std::uint64_t x = 0; x < counts.size(); ++x) {
      const double p = pmf_mask(spec, x);
      const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(s));
      CHECK(std::abs(static_cast<double>(counts[x]) / s - p) <= 5.0 * sigma + 1e-12);
    }
  }
}

TEST_CASE("sampling is reproducible and split-invariant") {
  const auto spec = ModelSpec::mixed({{0.7, 0.8, 0.9}, {0.6, 0.95, 0.75}});
  const auto all = sample_masks(spec, 77, 0, 1000);
  CHECK(all == sample_masks(spec, 77, 0, 1000));
  const auto head = sample_masks(spec, 77, 0, 400);
  const auto tail = sample_masks(spec, 77, 400, 600);
  std::vector<std::uint64_t> joined(head);
  joined.insert(joined.end(), tail.begin(), tail.end());
  CHECK(joined == all);
  CHECK(all != sample_masks(spec, 78, 0, 1000));

  const auto vectors = sample(spec, 77, 1000);
  for (std::size_t k = 0; k < vectors.size(); ++k) REQUIRE(vectors[k].to_mask() == all[k]);
}

TEST_CASE("rng substreams are deterministic and distinct") {
  auto a = substream(1, 0);
  auto b = substream(1, 0);
  auto c = substream(1, 1);
  const auto a0 = a();
  CHECK(a0 == b());
  CHECK(a0 != c());
  SplitMix64 u(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(ModelSpec::parallel({}), InvalidSpec);
  CHECK_THROWS_AS(ModelSpec::parallel({0.4}), InvalidSpec);
  CHECK_THROWS_AS(ModelSpec::serial({0.7, 1.1}), InvalidSpec);
  CHECK_THROWS_AS(ModelSpec::mixed({{0.7, 0.7}, {0.7}}), InvalidSpec);
  CHECK_THROWS_AS(ModelSpec::mixed({}), InvalidSpec);
  CHECK_THROWS_AS(ModelSpec::linear(BitMatrix::from_rows({"11", "11"}), {0.5, 0.5}), InvalidSpec);
  CHECK_THROWS_AS(ModelSpec::linear(BitMatrix::identity(3), {0.5, 0.5}), InvalidSpec);
  CHECK_THROWS_AS(ModelSpec::linear(BitMatrix(2, 3), {0.5, 0.5}), InvalidSpec);
  CHECK_THROWS_AS(ModelSpec::parallel({std::nan("")}), InvalidSpec);
  CHECK_NOTHROW(ModelSpec::linear(BitMatrix::identity(2), {0.0, 1.0}));

  const auto spec = ModelSpec::parallel({0.7, 0.7});
  CHECK_THROWS_AS((void)pmf(spec, BitVector(3)), DimensionMismatch);
  CHECK_THROWS_AS((void)conditional_pmf(spec, BitVector(1), false), DimensionMismatch);
  CHECK_THROWS_AS((void)pmf_table(ModelSpec::parallel(std::vector<double>(21, 0.7))), CapExceeded);
}

TEST_CASE("model kind names") {
  for (auto kind : {ModelKind::kParallel, ModelKind::kSerial, ModelKind::kMixed, ModelKind::kLinear}) {
    CHECK(model_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS((void)model_kind_from_string("tree"), InvalidSpec);
}

TEST_CASE("json round trip is lossless") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> bsc(0.5, 1.0);
  std::uniform_real_distribution<double> any(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + gen() % 8;
    std::vector<double> rho(n);
    for (auto& r : rho) r = bsc(gen);
    std::vector<ModelSpec> specs{ModelSpec::parallel(rho), ModelSpec::serial(rho)};
    std::vector<std::vector<double>> chains(1 + gen() % 3, rho);
    for (auto& c : chains) {
      for (auto& r : c) r = bsc(gen);
    }
    specs.push_back(ModelSpec::mixed(chains));
    BitMatrix a(n, n);
    do {
      a = oracle::random_matrix(n, n, gen);
    } while (!determinant(a));
    for (auto& r : rho) r = any(gen);
    specs.push_back(ModelSpec::linear(a, rho));
    for (const auto& spec : specs) {
      REQUIRE(model_from_json(model_to_json(spec)) == spec);
      REQUIRE(model_from_json_text(model_to_json(spec).dump()) == spec);
    }
  }
}

TEST_CASE("json schema errors and shorthands") {
  CHECK(model_from_json_text(R"({"kind":"parallel","n":3,"rho":0.7})") ==
        ModelSpec::parallel({0.7, 0.7, 0.7}));
  CHECK(model_from_json_text(R"({"kind":"serial","n":3,"rho":0.7})") ==
        ModelSpec::serial_constant(3, 0.7));
  CHECK(model_from_json_text(R"({"kind":"mixed","n":2,"m":2,"rho":[[0.7,0.8],[0.9,0.6]]})") ==
        ModelSpec::mixed({{0.7, 0.8}, {0.9, 0.6}}));
  CHECK(model_from_json_text(R"({"kind":"linear","n":2,"rho":[0.5,0.7],"A":["10","11"]})") ==
        ModelSpec::linear(BitMatrix::from_rows({"10", "11"}), {0.5, 0.7}));

  CHECK_THROWS_AS(model_from_json_text("{"), InvalidSpec);
  CHECK_THROWS_AS(model_from_json_text(R"({"kind":"tree","n":2,"rho":0.7})"), InvalidSpec);
  CHECK_THROWS_AS(model_from_json_text(R"({"kind":"parallel","n":3,"rho":[0.7,0.7]})"), InvalidSpec);
  CHECK_THROWS_AS(model_from_json_text(R"({"kind":"parallel","rho":[0.7]})"), InvalidSpec);
  CHECK_THROWS_AS(model_from_json_text(R"({"kind":"linear","n":2,"rho":[0.5,0.7]})"), InvalidSpec);
  CHECK_THROWS_AS(model_from_json_text(R"({"kind":"linear","n":2,"rho":[0.5,0.7],"A":["11","11"]})"),
                  InvalidSpec);
  CHECK_THROWS_AS(model_from_json_text(R"({"kind":"parallel","n":1,"rho":[0.7],"A":["1"]})"),
                  InvalidSpec);
  CHECK_THROWS_AS(read_model_file("/nonexistent/model.json"), IoError);
}
