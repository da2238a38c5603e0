#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "c3o/features.hpp"
#include "c3o/types.hpp"
#include "support.hpp"

using namespace c3o;
using test::make_record;
using test::small_catalog;

namespace {

bool holds_invariants(const RuntimeRecord& r) {
  auto lowercase = [](const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
      if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-')) return false;
    }
    return true;
  };
  if (!lowercase(r.signature.algorithm_name)) return false;
  if (r.signature.implementation_id.empty()) return false;
  if (r.config.machine_type.empty() || r.config.node_count < 1) return false;
  if (!(r.runtime_ms > 0) || !std::isfinite(r.runtime_ms)) return false;
  auto size = r.data_characteristics.find("size_mb");
  if (size == r.data_characteristics.end() || !(size->second > 0)) return false;
  for (const auto& [k, v] : r.data_characteristics) {
    if (!std::isfinite(v)) return false;
  }
  for (const auto& [k, v] : r.parameters) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("validate_record rejects non-positive runtime") {
  RuntimeRecord r = make_record("alpha", 4, 15000, 0.0);
  CHECK_THROWS_WITH_AS(validate_record(r), doctest::Contains("runtime_ms"), Error);
  try {
    validate_record(r);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidField);
  }
}

TEST_CASE("validate_record accepts a well-formed record") {
  RuntimeRecord r = make_record("alpha", 4, 15000, 423000);
  CHECK(validate_record(r) == r);
}

TEST_CASE("validate_record rejects non-finite parameter values") {
  RuntimeRecord r = make_record("alpha", 4, 15000, 1000,
                                {{"k_clusters", std::numeric_limits<double>::quiet_NaN()}});
  CHECK_THROWS_WITH_AS(validate_record(r), doctest::Contains("parameters.k_clusters"), Error);
}

TEST_CASE("validate_record enforces every invariant (randomized)") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    RuntimeRecord r = make_record("kmeans", 1 + int(rng() % 8), 1 + double(rng() % 30000),
                                  1 + double(rng() % 100000), {{"k", double(rng() % 10)}});
    switch (rng() % 8) {
      case 0: r.runtime_ms = -r.runtime_ms; break;
      case 1: r.signature.algorithm_name = "KMeans"; break;
      case 2: r.config.node_count = 0; break;
      case 3: r.data_characteristics["size_mb"] = 0; break;
      case 4: r.parameters["k"] = std::numeric_limits<double>::infinity(); break;
      case 5: r.signature.implementation_id = ""; break;
      default: break;  // leave valid
    }
    bool accepted = true;
    try {
      validate_record(r);
    } catch (const Error&) {
      accepted = false;
    }
    CHECK(accepted == holds_invariants(r));
  }
}

TEST_CASE("encode_features maps machine type to its catalog index") {
  RuntimeRecord r = make_record("beta", 4, 15000, 1000, {{"max_iterations", 50}});
  FeatureVector v = encode_features(r, small_catalog());
  CHECK(v.names == std::vector<std::string>{"machine_type_index", "node_count", "size_mb",
                                            "max_iterations"});
  CHECK(v.values == std::vector<double>{1, 4, 15000, 50});
}

TEST_CASE("encode_features rejects machines missing from the catalog") {
  RuntimeRecord r = make_record("gamma", 4, 15000, 1000);
  CHECK_THROWS_AS(encode_features(r, small_catalog()), Error);
  try {
    encode_features(r, small_catalog());
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownMachineType);
  }
}

TEST_CASE("encode_features orders data characteristics lexicographically") {
  RuntimeRecord r = make_record("alpha", 2, 15000, 1000);
  r.data_characteristics["keyword_ratio"] = 0.4;
  FeatureVector v = encode_features(r, small_catalog());
  CHECK(v.names == std::vector<std::string>{"machine_type_index", "node_count", "keyword_ratio",
                                            "size_mb"});
}

TEST_CASE("encode_features is deterministic") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    RuntimeRecord r = make_record(rng() % 2 ? "alpha" : "beta", 1 + int(rng() % 16),
                                  1 + double(rng() % 30000), 1 + double(rng() % 100000),
                                  {{"p", double(rng() % 100)}});
    CHECK(encode_features(r, small_catalog()) == encode_features(r, small_catalog()));
  }
}

TEST_CASE("normalize_features maps to [0,1] with the affine rule") {
  std::vector<FeatureVector> vs = {{{"x"}, {2}}, {{"x"}, {4}}, {{"x"}, {6}}};
  auto [normalized, table] = normalize_features(vs);
  CHECK(normalized[0].values[0] == doctest::Approx(0.0));
  CHECK(normalized[1].values[0] == doctest::Approx(0.5));
  CHECK(normalized[2].values[0] == doctest::Approx(1.0));

  SUBCASE("query values outside the range extrapolate without clamping") {
    CHECK(table.normalize_value(0, 8.0) == doctest::Approx(1.5));
  }
}

TEST_CASE("constant features normalize to 0.5") {
  std::vector<FeatureVector> vs = {{{"x"}, {7}}, {{"x"}, {7}}, {{"x"}, {7}}};
  auto [normalized, table] = normalize_features(vs);
  for (const auto& v : normalized) CHECK(v.values[0] == doctest::Approx(0.5));
}

TEST_CASE("normalize_features rejects heterogeneous name lists") {
  std::vector<FeatureVector> vs = {{{"x"}, {1}}, {{"y"}, {2}}};
  try {
    normalize_features(vs);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HeterogeneousFeatures);
  }
}

TEST_CASE("normalize then denormalize round-trips non-constant features") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<FeatureVector> vs;
    for (int i = 0; i < 10; ++i) {
      vs.push_back({{"a", "b"}, {double(rng() % 10000) / 7.0, double(rng() % 1000) - 500.0}});
    }
    auto [normalized, table] = normalize_features(vs);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        if (table.maxs[j] <= table.mins[j]) continue;
        const double back = table.denormalize_value(j, normalized[i].values[j]);
        CHECK(back == doctest::Approx(vs[i].values[j]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("median_runtime follows the even/odd conventions") {
  CHECK(median_runtime({100, 300, 200}) == 200);
  CHECK(median_runtime({100, 200}) == 150);
  CHECK(median_runtime({42}) == 42);
  CHECK_THROWS_AS(median_runtime({}), Error);
}

TEST_CASE("median_runtime is permutation invariant") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> xs;
    const int n = 1 + int(rng() % 9);
    for (int i = 0; i < n; ++i) xs.push_back(1.0 + double(rng() % 1000));
    const double reference = median_runtime(xs);
    std::shuffle(xs.begin(), xs.end(), rng);
    CHECK(median_runtime(xs) == reference);
  }
}
