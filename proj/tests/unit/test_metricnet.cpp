#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <unistd.h>

#include "doctest.h"
#include "gaitid/metricnet/dataset.hpp"
#include "gaitid/metricnet/encoder.hpp"
#include "gaitid/metricnet/sampler.hpp"
#include "gaitid/metricnet/train.hpp"
#include "gaitid/metricnet/triplet.hpp"
#include "helpers.hpp"
#include "synthetic_slices.hpp"

using namespace gaitid;
using namespace gaitid::metricnet;
using doctest::Approx;

namespace {

using testing::synthetic_set;

EncoderConfig small_encoder(int in_channels, int size) {
  EncoderConfig e;
  e.in_channels = in_channels;
  e.stage_channels = {8, 8, 16, 16};
  e.embedding_dim = 8;
  e.input_h = e.input_w = size;
  return e;
}

std::vector<double> random_embeddings(int n, int d, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  std::vector<double> z(static_cast<std::size_t>(n) * d);
  for (auto& v : z) v = nd(g);
  return z;
}

// Enumerates every (anchor, positive, negative) triple.
struct Exhaustive {
  double loss = 0.0;
  std::vector<int> hp, hn;
};

Exhaustive enumerate_triplets(const std::vector<double>& dist, const std::vector<int>& labels, double margin) {
  const int n = static_cast<int>(labels.size());
  Exhaustive r;
  for (int a = 0; a < n; ++a) {
    double worst = -1e300;
    int bp = -1, bn = -1;
    for (int p = 0; p < n; ++p) {
      if (p == a || labels[p] != labels[a]) continue;
      for (int q = 0; q < n; ++q) {
        if (labels[q] == labels[a]) continue;
        const double v = dist[a * n + p] - dist[a * n + q];
        if (v > worst) {
          worst = v;
          bp = p;
          bn = q;
        }
      }
    }
    r.loss += std::max(worst + margin, 0.0);
    r.hp.push_back(bp);
    r.hn.push_back(bn);
  }
  r.loss /= n;
  return r;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("gaitid_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("encoder shapes, determinism and branch widths") {
  EncoderConfig cfg;
  Encoder<float> a(cfg, 7), b(cfg, 7), c(cfg, 8);
  REQUIRE(a.params().size() == b.params().size());
  CHECK(a.params().count() == b.params().count());
  bool differs = false;
  for (std::size_t i = 0; i < a.params().size(); ++i) {
    CHECK(a.params()[i].value.data == b.params()[i].value.data);
    differs = differs || a.params()[i].value.data != c.params()[i].value.data;
  }
  CHECK(differs);

  // Stage 1 branch outputs sum to its channel count: 2 + 4 + 1 + 1.
  std::map<std::string, int> out;
  for (std::size_t i = 0; i < a.params().size(); ++i) out[a.params()[i].name] = a.params()[i].value.dim(0);
  CHECK(out["stage1.b1.w"] == 2);
  CHECK(out["stage1.b3.w"] == 4);
  CHECK(out["stage1.b5.w"] == 1);
  CHECK(out["stage1.pool_proj.w"] == 1);
  CHECK(out["stage1.skip.w"] == 8);
  for (int s = 1; s <= 4; ++s) {
    const std::string p = "stage" + std::to_string(s);
    CHECK(out[p + ".b1.w"] + out[p + ".b3.w"] + out[p + ".b5.w"] + out[p + ".pool_proj.w"] ==
          cfg.stage_channels[static_cast<std::size_t>(s - 1)]);
  }

  Tape<float> tape(Exec::serial);
  Tensor<float> x({3, 2, 64, 64});
  x.data = testing::random_values<float>(x.size(), 3, 0.0f, 1.0f);
  const Var z = a.forward(tape, x);
  CHECK(tape.value(z).dims == std::vector<int>{3, 64});
  const auto chunked = a.embed(x, Exec::serial, 2);
  for (std::size_t i = 0; i < chunked.size(); ++i) CHECK(chunked[i] == Approx(tape.value(z)[i]).epsilon(1e-5));

  EncoderConfig bad = cfg;
  bad.stage_channels = {8, 16, 32, 60};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.input_h = 40;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_THROWS_AS(a.embed(Tensor<float>({1, 1, 64, 64})), ValidationError);
}

TEST_CASE("the full encoder with the triplet loss passes a finite-difference check") {
  EncoderConfig cfg;
  cfg.in_channels = 2;
  Encoder<double> enc(cfg, 3);
  // Nonzero biases so that every bias gradient is exercised away from init.
  for (std::size_t i = 0; i < enc.params().size(); ++i) {
    auto& p = enc.params()[i];
    if (p.value.rank() == 1) p.value.data = testing::random_values<double>(p.value.size(), 100 + i, -0.05, 0.05);
  }
  Tensor<double> x({4, 2, 64, 64});
  x.data = testing::random_values<double>(x.size(), 4, 0.0, 1.0);
  const std::vector<int> labels = {0, 0, 1, 1};
  // Just enough margin to keep every anchor active; a large constant in the
  // loss would drown the central differences in rounding.
  double margin = 0.0;
  {
    Tape<double> t(Exec::parallel);
    const auto& z = t.value(enc.forward(t, x));
    const auto bh = batch_hard(pairwise_distances(z.data, 4, z.dim(1)), labels, 1.0);
    for (int i = 0; i < 4; ++i) margin = std::max(margin, bh.hn[i] - bh.hp[i]);
    margin += 0.5;
  }

  auto loss = [&] {
    Tape<double> t(Exec::parallel);
    return t.value(batch_hard_loss(t, enc.forward(t, x), labels, margin))[0];
  };
  enc.params().zero_grad();
  {
    Tape<double> t(Exec::parallel);
    t.backward(batch_hard_loss(t, enc.forward(t, x), labels, margin));
  }
  // Relative error with a floor at 1e-3 of the largest gradient entry, so
  // entries that are numerically zero do not divide rounding noise by zero.
  double gmax = 0.0;
  for (std::size_t i = 0; i < enc.params().size(); ++i) {
    for (double v : enc.params()[i].grad.data) gmax = std::max(gmax, std::abs(v));
  }
  // Entries whose stencil straddles a ReLU or max-pool switch are resampled;
  // there the one-sided slopes disagree and no finite difference is valid.
  const double base = loss();
  std::mt19937_64 g(9);
  double worst = 0.0;
  int tried = 0, kinks = 0;
  for (std::size_t i = 0; i < enc.params().size(); ++i) {
    auto& p = enc.params()[i];
    for (int s = 0, attempts = 0; s < 3 && attempts < 20; ++attempts) {
      const std::size_t k = g() % p.value.size();
      const double x0 = p.value[k];
      const double h = 1e-5;
      p.value[k] = x0 + h;
      const double up = loss();
      p.value[k] = x0 - h;
      const double down = loss();
      p.value[k] = x0;
      const double numeric = (up - down) / (2 * h);
      const double a = p.grad[k];
      const double scale = std::max({std::abs(a), std::abs(numeric), 1e-3 * gmax});
      ++tried;
      if (std::abs((up - base) - (base - down)) / h > 1e-4 * scale) {
        ++kinks;
        continue;
      }
      ++s;
      const double rel = std::abs(a - numeric) / scale;
      INFO(p.name << "[" << k << "] analytic " << a << " numeric " << numeric);
      CHECK(rel < 1e-5);
      worst = std::max(worst, rel);
    }
  }
  CHECK(kinks * 5 < tried);
  MESSAGE("worst relative error " << worst << ", " << kinks << " of " << tried << " entries near a kink");
}

TEST_CASE("pairwise distances") {
  const auto d = pairwise_distances({0, 0, 3, 4}, 2, 2);
  CHECK(d == std::vector<double>{0, 5, 5, 0});
  CHECK(pairwise_distances({1, 2, 1, 2}, 2, 2)[1] == 0.0);
  std::mt19937_64 g(1);
  const auto z = random_embeddings(6, 4, g);
  const auto m = pairwise_distances(z, 6, 4);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      double s = 0;
      for (int k = 0; k < 4; ++k) s += (z[i * 4 + k] - z[j * 4 + k]) * (z[i * 4 + k] - z[j * 4 + k]);
      CHECK(m[i * 6 + j] == Approx(std::sqrt(s)).epsilon(1e-12));
      CHECK(m[i * 6 + j] == m[j * 6 + i]);
    }
  }
}

TEST_CASE("batch-hard loss examples") {
  const std::vector<double> dist = {0, 1, 4, 3, 1, 0, 2, 5, 4, 2, 0, 1, 3, 5, 1, 0};
  const std::vector<int> labels = {0, 0, 1, 1};
  const auto r = batch_hard(dist, labels, 0.5);
  CHECK(r.hp == std::vector<double>{1, 1, 1, 1});
  CHECK(r.hn == std::vector<double>{3, 2, 2, 3});
  CHECK(r.loss == 0.0);
  CHECK(batch_hard(dist, labels, 1.5).loss == Approx(0.25));

  const std::vector<double> same(16, 0.0);
  CHECK(batch_hard(same, labels, 0.5).loss == 0.5);

  Tape<double> tape;
  Tensor<double> far({4, 2});
  far.data = {0, 0, 0, 0, 100, 0, 100, 0};
  CHECK(tape.value(batch_hard_loss(tape, tape.leaf(far), labels, 0.5))[0] == 0.0);
  Tensor<double> ident({4, 2}, 1.0);
  Var zi = tape.leaf(ident, true);
  Var li = batch_hard_loss(tape, zi, labels, 0.5);
  CHECK(tape.value(li)[0] == 0.5);
  tape.backward(li);
  for (double v : tape.grad(zi).data) CHECK(std::isfinite(v));
}

TEST_CASE("batch-hard loss against exhaustive enumeration, with invariances") {
  std::mt19937_64 g(21);
  for (int trial = 0; trial < 500; ++trial) {
    const int classes = 2 + static_cast<int>(g() % 3);
    std::vector<int> labels;
    for (int c = 0; c < classes; ++c) {
      const int k = 2 + static_cast<int>(g() % 2);
      for (int i = 0; i < k && labels.size() < 8; ++i) labels.push_back(c);
    }
    if (std::count(labels.begin(), labels.end(), labels.back()) < 2) labels.pop_back();
    if (std::count(labels.begin(), labels.end(), labels.back()) < 2) continue;
    const int n = static_cast<int>(labels.size());
    const int d = 3;
    const double margin = 0.1 + (g() % 100) / 50.0;
    auto z = random_embeddings(n, d, g);
    const auto dist = pairwise_distances(z, n, d);
    const auto r = batch_hard(dist, labels, margin);
    const auto o = enumerate_triplets(dist, labels, margin);
    CHECK(r.hp_index == o.hp);
    CHECK(r.hn_index == o.hn);
    CHECK(std::abs(r.loss - o.loss) < 1e-9);
    CHECK(r.loss >= 0.0);
    bool all_ok = true;
    for (int i = 0; i < n; ++i) all_ok = all_ok && r.hn[i] >= r.hp[i] + margin;
    CHECK((r.loss == 0.0) == all_ok);

    // Translation leaves distances and the loss unchanged; scaling scales them.
    auto moved = z;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) moved[i * d + k] += 3.0 * (k + 1);
    }
    CHECK(batch_hard(pairwise_distances(moved, n, d), labels, margin).loss == Approx(r.loss).epsilon(1e-9));
    auto scaled = z;
    for (auto& v : scaled) v *= 2.5;
    const auto sd = pairwise_distances(scaled, n, d);
    for (std::size_t i = 0; i < sd.size(); ++i) CHECK(sd[i] == Approx(2.5 * dist[i]).epsilon(1e-12));

    // Permuting the batch permutes nothing in the mean.
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), g);
    std::vector<double> pz(z.size());
    std::vector<int> pl(n);
    for (int i = 0; i < n; ++i) {
      pl[i] = labels[perm[i]];
      for (int k = 0; k < d; ++k) pz[i * d + k] = z[perm[i] * d + k];
    }
    CHECK(batch_hard(pairwise_distances(pz, n, d), pl, margin).loss == Approx(r.loss).epsilon(1e-12));

    // The differentiable node reports the same value.
    Tape<double> tape;
    Tensor<double> zt({n, d});
    zt.data = z;
    CHECK(tape.value(batch_hard_loss(tape, tape.leaf(zt), labels, margin))[0] == Approx(r.loss).epsilon(1e-12));
  }
}

TEST_CASE("batch label errors name the offending label") {
  try {
    check_batch_labels({0, 0, 7, 1, 1});
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("label 7") != std::string::npos);
  }
  CHECK_THROWS_AS(check_batch_labels({3, 3, 3}), ValidationError);
  TripletConfig t;
  t.margin = 0;
  CHECK_THROWS_AS(t.validate(), ValidationError);
}

TEST_CASE("balanced sampler") {
  std::vector<int> labels;
  for (int c = 0; c < 7; ++c) {
    for (int i = 0; i < 10 + 3 * c; ++i) labels.push_back(c * 10);
  }
  BalancedSampler s(labels, 5, 8, 4), twin(labels, 5, 8, 4);
  std::map<int, int> visits;
  for (int b = 0; b < 100; ++b) {
    const auto batch = s.next();
    CHECK(batch == twin.next());
    REQUIRE(batch.size() == 40u);
    std::map<int, std::vector<int>> per;
    for (int idx : batch) per[labels[static_cast<std::size_t>(idx)]].push_back(idx);
    CHECK(per.size() == 5u);
    for (auto& [label, members] : per) {
      CHECK(members.size() == 8u);
      std::sort(members.begin(), members.end());
      CHECK(std::adjacent_find(members.begin(), members.end()) == members.end());
      ++visits[label];
    }
    int lo = 1 << 30, hi = 0;
    for (int c = 0; c < 7; ++c) {
      lo = std::min(lo, visits[c * 10]);
      hi = std::max(hi, visits[c * 10]);
    }
    CHECK(hi - lo <= 1);
  }
  CHECK_THROWS_AS(BalancedSampler(labels, 8, 8, 1), ValidationError);
  CHECK_THROWS_AS(BalancedSampler(labels, 5, 11, 1), ValidationError);
}

TEST_CASE("dataset batches, subsets and capture splits") {
  const auto set = synthetic_set(3, 12, 4, 16, 1);
  CHECK(set.size() == 36u);
  CHECK(set.distinct_labels() == std::vector<int>{0, 1, 2});
  CHECK(input_channels(InputMode::ud) == 1);
  CHECK(input_channels(InputMode::concat) == 2);
  CHECK(input_mode_from_string(to_string(InputMode::uw)) == InputMode::uw);
  CHECK_THROWS_AS(input_mode_from_string("sonar"), ValidationError);

  const auto batch = make_batch<float>(set, {4, 0}, InputMode::concat);
  CHECK(batch.dims == std::vector<int>{2, 2, 16, 16});
  CHECK(batch.at(0, 0, 3, 5) == set.ud[4 * 256 + 3 * 16 + 5]);
  CHECK(batch.at(1, 1, 7, 2) == set.uw[7 * 16 + 2]);
  CHECK(make_batch<float>(set, {1}, InputMode::uw).at(0, 0, 0, 0) == set.uw[256]);

  const auto sub = set.subset({30, 2});
  CHECK(sub.labels == std::vector<int>{set.labels[30], set.labels[2]});
  CHECK(sub.sources.size() == set.sources.size());

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto split = split_by_capture(set, 0.7, seed);
    CHECK(split.train.size() + split.held_out.size() == set.size());
    std::set<int> train_caps, held_caps;
    for (int i : split.train) train_caps.insert(set.capture[static_cast<std::size_t>(i)]);
    for (int i : split.held_out) held_caps.insert(set.capture[static_cast<std::size_t>(i)]);
    for (int c : train_caps) CHECK(held_caps.count(c) == 0);
    CHECK(train_caps.size() == 9u);  // round(0.7 * 4) = 3 of 4 per subject
    CHECK(held_caps.size() == 3u);
    CHECK(split_by_capture(set, 0.7, seed).train == split.train);
  }
  CHECK_THROWS_AS(split_by_capture(set, 1.0, 1), ValidationError);
}

TEST_CASE("mode selects the encoder input channels") {
  const auto set = synthetic_set(2, 6, 2, 16, 2);
  TrainConfig cfg;
  cfg.encoder = small_encoder(2, 16);
  cfg.epochs = 1;
  cfg.batches_per_epoch = 1;
  cfg.exec = Exec::serial;
  for (auto [mode, ch] : {std::pair{InputMode::ud, 1}, {InputMode::uw, 1}, {InputMode::concat, 2}}) {
    cfg.mode = mode;
    CHECK(train(set, nullptr, cfg, 1).encoder.config().in_channels == ch);
  }
  SliceSet empty;
  CHECK_THROWS_AS(train(empty, nullptr, cfg, 1), ValidationError);
}

TEST_CASE("training descends, is deterministic in serial mode and checkpoints round trip") {
  const auto set = synthetic_set(2, 50, 5, 32, 3, 0.1f);
  const auto split = split_by_capture(set, 0.7, 1);
  const auto tr = set.subset(split.train);
  const auto va = set.subset(split.held_out);
  TrainConfig cfg;
  cfg.encoder = small_encoder(2, 32);
  cfg.epochs = 20;
  cfg.triplet.margin = 5.0;
  cfg.exec = Exec::serial;
  auto r1 = train(tr, &va, cfg, 5);
  auto r2 = train(tr, &va, cfg, 5);
  REQUIRE(r1.history.size() == 20u);
  MESSAGE("train loss " << r1.history.front().train_loss << " -> " << r1.history.back().train_loss);
  CHECK(r1.history.back().train_loss < r1.history.front().train_loss);
  CHECK(std::isfinite(r1.history.back().val_loss));
  for (std::size_t i = 0; i < r1.history.size(); ++i) {
    CHECK(r1.history[i].train_loss == r2.history[i].train_loss);
    CHECK(r1.history[i].val_loss == r2.history[i].val_loss);
  }

  const auto dir = temp_dir("ckpt");
  save_checkpoint(dir, r1.encoder, cfg, r1.history);
  auto ck = load_checkpoint(dir);
  REQUIRE(ck.encoder.params().size() == r1.encoder.params().size());
  for (std::size_t i = 0; i < ck.encoder.params().size(); ++i) {
    CHECK(ck.encoder.params()[i].name == r1.encoder.params()[i].name);
    CHECK(ck.encoder.params()[i].value.data == r1.encoder.params()[i].value.data);
  }
  CHECK(ck.config.mode == cfg.mode);
  CHECK(ck.encoder.config() == r1.encoder.config());
  REQUIRE(ck.history.size() == r1.history.size());
  CHECK(ck.history.back().train_loss == r1.history.back().train_loss);
  CHECK(embed(ck.encoder, va, cfg.mode, Exec::serial).data == embed(r1.encoder, va, cfg.mode, Exec::serial).data);
  std::filesystem::remove_all(dir / "params");
  CHECK_THROWS(load_checkpoint(dir));
  std::filesystem::remove_all(dir);
}
