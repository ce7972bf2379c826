#include "gaitid/metricnet/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include "json.hpp"
#include <sstream>

#include "gaitid/io/rten.hpp"
#include "gaitid/metricnet/sampler.hpp"

namespace gaitid::metricnet {

void TrainConfig::validate() const {
  EncoderConfig e = encoder;
  e.in_channels = input_channels(mode);
  e.validate();
  triplet.validate();
  adam.validate();
  require(epochs >= 1, "net.epochs", "must be at least 1");
  require(batches_per_epoch >= 0, "net.batches_per_epoch", "must be non-negative");
}

namespace {

struct BatchShape {
  int p = 0;
  int k = 0;
};

// Largest P x K the set supports, or {0, 0} when it cannot form a batch.
BatchShape fit_batch(const SliceSet& set, const TripletConfig& t) {
  std::map<int, int> counts;
  for (int l : set.labels) ++counts[l];
  if (counts.size() < 2) return {};
  int smallest = std::numeric_limits<int>::max();
  for (const auto& [l, c] : counts) smallest = std::min(smallest, c);
  BatchShape b{std::min<int>(t.classes_per_batch, static_cast<int>(counts.size())),
               std::min(t.samples_per_class, smallest)};
  if (b.k < 2) return {};
  return b;
}

std::vector<int> labels_of(const SliceSet& set, const std::vector<int>& idx) {
  std::vector<int> l;
  l.reserve(idx.size());
  for (int i : idx) l.push_back(set.labels[static_cast<std::size_t>(i)]);
  return l;
}

}  // namespace

double validation_loss(Encoder<float>& enc, const SliceSet& set, const TrainConfig& cfg, std::uint64_t seed) {
  const BatchShape shape = fit_batch(set, cfg.triplet);
  if (shape.p == 0) return std::numeric_limits<double>::quiet_NaN();
  BalancedSampler sampler(set.labels, shape.p, shape.k, split_seed(seed, 0x56414C));
  const auto n_batches = std::max<std::size_t>(1, (set.size() + sampler.batch_size() - 1) / sampler.batch_size());
  double total = 0.0;
  for (std::size_t b = 0; b < n_batches; ++b) {
    const auto idx = sampler.next();
    const Tensor<float> z = enc.embed(make_batch<float>(set, idx, cfg.mode), cfg.exec);
    const std::vector<double> zd(z.data.begin(), z.data.end());
    total += batch_hard(pairwise_distances(zd, z.dim(0), z.dim(1)), labels_of(set, idx), cfg.triplet.margin).loss;
  }
  return total / static_cast<double>(n_batches);
}

TrainResult train(const SliceSet& train_set, const SliceSet* val_set, const TrainConfig& cfg, std::uint64_t seed,
                  const std::function<void(const EpochLoss&)>& on_epoch) {
  cfg.validate();
  require(train_set.size() > 0, "dataset", "training set is empty");
  const BatchShape shape = fit_batch(train_set, cfg.triplet);
  require(shape.p > 0, "dataset", "training set needs two classes with at least two slices each");

  EncoderConfig ec = cfg.encoder;
  ec.in_channels = input_channels(cfg.mode);
  ec.input_h = train_set.h;
  ec.input_w = train_set.w;
  TrainResult r{Encoder<float>(ec, split_seed(seed, 0x494E4954)), {}};
  BalancedSampler sampler(train_set.labels, shape.p, shape.k, split_seed(seed, 0x53414D50));
  autodiff::AdamState<float> adam;
  Tape<float> tape(cfg.exec);
  const int n_batches = cfg.batches_per_epoch > 0
                            ? cfg.batches_per_epoch
                            : static_cast<int>((train_set.size() + sampler.batch_size() - 1) / sampler.batch_size());

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    double sum = 0.0;
    for (int b = 0; b < n_batches; ++b) {
      const auto idx = sampler.next();
      tape.clear();
      const Var z = r.encoder.forward(tape, make_batch<float>(train_set, idx, cfg.mode));
      const Var loss = batch_hard_loss(tape, z, labels_of(train_set, idx), cfg.triplet.margin);
      sum += tape.value(loss)[0];
      r.encoder.params().zero_grad();
      tape.backward(loss);
      autodiff::adam_step(r.encoder.params(), adam, cfg.adam);
    }
    EpochLoss e{epoch, sum / n_batches, std::numeric_limits<double>::quiet_NaN()};
    if (val_set && val_set->size() > 0) e.val_loss = validation_loss(r.encoder, *val_set, cfg, seed);
    r.history.push_back(e);
    if (on_epoch) on_epoch(e);
  }
  return r;
}

Tensor<float> embed(Encoder<float>& enc, const SliceSet& set, InputMode mode, Exec exec) {
  std::vector<int> idx(set.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  return enc.embed(make_batch<float>(set, idx, mode), exec);
}

namespace {

nlohmann::json architecture_json(const EncoderConfig& e, const TrainConfig& cfg) {
  return {{"format", "gaitid-encoder"},
          {"version", 1},
          {"mode", to_string(cfg.mode)},
          {"in_channels", e.in_channels},
          {"stage_channels", e.stage_channels},
          {"embedding_dim", e.embedding_dim},
          {"input_size", {e.input_h, e.input_w}},
          {"margin", cfg.triplet.margin},
          {"classes_per_batch", cfg.triplet.classes_per_batch},
          {"samples_per_class", cfg.triplet.samples_per_class},
          {"lr", cfg.adam.lr},
          {"epochs", cfg.epochs}};
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

void save_checkpoint(const std::filesystem::path& dir, const Encoder<float>& enc, const TrainConfig& cfg,
                     const std::vector<EpochLoss>& history) {
  nlohmann::json arch = architecture_json(enc.config(), cfg);
  nlohmann::json names = nlohmann::json::array();
  for (std::size_t i = 0; i < enc.params().size(); ++i) {
    const auto& p = enc.params()[i];
    std::vector<std::uint64_t> dims(p.value.dims.begin(), p.value.dims.end());
    io::write_rten<float>(dir / "params" / (p.name + ".rten"), p.value.data, dims);
    names.push_back(p.name);
  }
  arch["parameters"] = names;
  io::write_text_file(dir / "architecture.json", arch.dump(2) + "\n");
  std::ostringstream csv;
  csv << "epoch,train_loss,val_loss\n";
  for (const auto& e : history) csv << e.epoch << ',' << fmt(e.train_loss) << ',' << fmt(e.val_loss) << '\n';
  io::write_text_file(dir / "history.csv", csv.str());
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
  nlohmann::json arch;
  try {
    arch = nlohmann::json::parse(io::read_text_file(dir / "architecture.json"));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("architecture.json: " + std::string(e.what()));
  }
  require(arch.value("format", "") == "gaitid-encoder", "checkpoint", "not an encoder checkpoint");
  TrainConfig cfg;
  cfg.mode = input_mode_from_string(arch.at("mode").get<std::string>());
  cfg.encoder.in_channels = arch.at("in_channels").get<int>();
  cfg.encoder.stage_channels = arch.at("stage_channels").get<std::vector<int>>();
  cfg.encoder.embedding_dim = arch.at("embedding_dim").get<int>();
  cfg.encoder.input_h = arch.at("input_size").at(0).get<int>();
  cfg.encoder.input_w = arch.at("input_size").at(1).get<int>();
  cfg.triplet.margin = arch.at("margin").get<double>();
  cfg.triplet.classes_per_batch = arch.at("classes_per_batch").get<int>();
  cfg.triplet.samples_per_class = arch.at("samples_per_class").get<int>();
  cfg.adam.lr = arch.at("lr").get<double>();
  cfg.epochs = arch.at("epochs").get<int>();

  Checkpoint ck{Encoder<float>(cfg.encoder, 0), cfg, {}};
  auto& params = ck.encoder.params();
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    const auto t = io::read_rten<float>(dir / "params" / (p.name + ".rten"));
    require(std::equal(t.dims.begin(), t.dims.end(), p.value.dims.begin(), p.value.dims.end(),
                       [](std::uint64_t a, int b) { return a == static_cast<std::uint64_t>(b); }),
            "checkpoint", "parameter " + p.name + " has the wrong shape");
    p.value.data = t.values;
  }

  std::istringstream csv(io::read_text_file(dir / "history.csv"));
  std::string line;
  std::getline(csv, line);
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    EpochLoss e;
    std::istringstream row(line);
    std::string a, b, c;
    std::getline(row, a, ',');
    std::getline(row, b, ',');
    std::getline(row, c, ',');
    e.epoch = std::stoi(a);
    e.train_loss = std::stod(b);
    e.val_loss = c == "nan" || c == "-nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(c);
    ck.history.push_back(e);
  }
  return ck;
}

}  // namespace gaitid::metricnet
