// Copyright 2026 The spse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "spse/train/trainer.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "spse/error.h"
#include "spse/hc/compensation.h"
#include "spse/loss/losses.h"
#include "spse/model/spectral_tensor.h"
#include "spse/nn/ops.h"
#include "spse/pitch/estimator.h"
#include "spse/train/schedule.h"
#include "spse/util/key_value.h"

namespace spse::train {

namespace {

using nn::Tensor;
using nn::Var;

// Joins [1, ...] tensors along the batch axis.
Tensor StackItems(const std::vector<const Tensor*>& items) {
  nn::Shape shape = items.front()->shape();
  shape[0] = static_cast<std::int64_t>(items.size());
  Tensor out(shape);
  const std::int64_t n = items.front()->size();
  for (size_t i = 0; i < items.size(); ++i)
    std::copy_n(items[i]->data(), n, out.data() + static_cast<std::int64_t>(i) * n);
  return out;
}

audio::Waveform Slice(const audio::Waveform& w, size_t offset, size_t length) {
  audio::Waveform out;
  out.sample_rate_hz = w.sample_rate_hz;
  out.samples.assign(w.samples.begin() + offset, w.samples.begin() + offset + length);
  return out;
}

// Rows past the end repeat the last row.
data::PitchLabelMatrix SliceRows(const data::PitchLabelMatrix& m, int first, int rows) {
  data::PitchLabelMatrix out;
  out.frames = rows;
  out.dims = m.dims;
  out.values.resize(static_cast<size_t>(rows) * m.dims);
  for (int t = 0; t < rows; ++t) {
    const int src = std::min(first + t, m.frames - 1);
    std::copy_n(m.values.begin() + static_cast<size_t>(src) * m.dims, m.dims,
                out.values.begin() + static_cast<size_t>(t) * m.dims);
  }
  return out;
}

std::string ModelConfigText(const model::ModelConfig& cfg) {
  KeyValueConfig kv;
  cfg.Write(kv);
  return kv.ToText();
}

}  // namespace

nlohmann::json StepRecord::ToJson() const {
  nlohmann::json j;
  j["stage"] = StageName(stage);
  j["step"] = step;
  j["epoch"] = epoch;
  j["lr"] = lr;
  j["grad_norm"] = grad_norm;
  nlohmann::json l = nlohmann::json::object();
  for (const auto& [name, value] : losses) l[name] = value;
  j["loss"] = l;
  return j;
}

Trainer::Trainer(model::SpeechEnhancer& enhancer, const TrainConfig& cfg, Stage stage,
                 std::vector<data::Example> examples, std::set<Stage> completed)
    : enh_(enhancer),
      cfg_(cfg),
      stage_(stage),
      examples_(std::move(examples)),
      completed_(std::move(completed)),
      adam_(cfg.adam),
      rng_(cfg.seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(stage) + 1) {
  cfg_.Validate();
  cfg_.loss.gamma = enh_.config().gamma;
  if (examples_.empty()) throw DataError("no training examples");
  for (Stage s : Prerequisites(stage_)) {
    if (!completed_.count(s))
      throw DataError("stage " + StageName(stage_) + " needs weights from a finished " +
                      StageName(s) + " stage");
  }
  if (stage_ != Stage::kPl && !enh_.has_compensation())
    throw ConfigError("stage " + StageName(stage_) + " needs a model with harmonic compensation");
  FreezeForStage(stage_, enh_.config(), enh_.params());
  for (const auto& ex : examples_) {
    if (ex.mixture.size() != ex.clean.size())
      throw DataError(ex.id + ": mixture and clean lengths differ");
    if (ex.mixture.size() < static_cast<size_t>(stft_.win_len))
      throw DataError(ex.id + ": shorter than one STFT window");
  }
  ladders_.resize(examples_.size());
  stream_cache_.resize(examples_.size());
  pitch_cache_.resize(examples_.size());
  if (finished()) completed_.insert(stage_);
}

void Trainer::FixBatch(std::vector<int> example_indices) {
  for (int i : example_indices)
    if (i < 0 || i >= static_cast<int>(examples_.size()))
      throw std::out_of_range("FixBatch: example index out of range");
  if (example_indices.empty()) throw std::invalid_argument("FixBatch: empty batch");
  fixed_batch_ = std::move(example_indices);
}

Trainer::Batch Trainer::SampleBatch() {
  std::vector<int> index;
  if (fixed_batch_) {
    index = *fixed_batch_;
  } else {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(examples_.size()) - 1);
    for (int b = 0; b < cfg_.batch_size; ++b) index.push_back(pick(rng_));
  }
  size_t length = fixed_batch_
                      ? examples_[index[0]].mixture.size()
                      : static_cast<size_t>(cfg_.crop_seconds * stft_.sample_rate_hz);
  for (int i : index) length = std::min(length, examples_[i].mixture.size());
  std::vector<size_t> offset;
  for (int i : index) {
    const size_t slots = (examples_[i].mixture.size() - length) / stft_.hop;
    size_t off = 0;
    if (!fixed_batch_ && slots > 0)
      off = std::uniform_int_distribution<size_t>(0, slots)(rng_) * stft_.hop;
    offset.push_back(off);
  }
  return MakeBatch(std::move(index), std::move(offset), length);
}

Trainer::Batch Trainer::MakeBatch(std::vector<int> index, std::vector<size_t> offset,
                                  size_t length) {
  Batch b;
  b.length = length;
  b.whole = true;
  const int frames = audio::NumFrames(length, stft_);
  for (size_t i = 0; i < index.size(); ++i) {
    const auto& ex = examples_[index[i]];
    b.whole = b.whole && offset[i] == 0 && length == ex.mixture.size();
    b.mixture.push_back(Slice(ex.mixture, offset[i], length));
    b.clean.push_back(Slice(ex.clean, offset[i], length));
    b.labels.push_back(SliceRows(ex.labels, static_cast<int>(offset[i] / stft_.hop), frames));
  }
  b.index = std::move(index);
  b.offset = std::move(offset);
  return b;
}

Tensor Trainer::MixtureSpectra(const Batch& b) const {
  std::vector<audio::ComplexSpectrogram> specs;
  for (const auto& m : b.mixture) specs.push_back(audio::Stft(m, stft_));
  return model::StackSpectrograms(specs);
}

Tensor Trainer::FrozenStream(const Batch& b, int blocks) {
  nn::NoGradGuard no_grad;
  const auto& net = enh_.model();
  auto run = [&](const Tensor& spec) {
    Var s = net.Embed(Var(spec));
    for (int i = 0; i < blocks; ++i) s = net.Block(i, s);
    return s.value();
  };
  if (!(cfg_.cache_frozen && b.whole)) return run(MixtureSpectra(b));
  std::vector<const Tensor*> items;
  for (size_t i = 0; i < b.index.size(); ++i) {
    auto& slot = stream_cache_[b.index[i]];
    if (!slot) {
      const auto spec = audio::Stft(b.mixture[i], stft_);
      slot = run(model::StackSpectrograms(std::span(&spec, 1)));
    }
    items.push_back(&*slot);
  }
  return StackItems(items);
}

const data::ProgressiveTargetSet& Trainer::Ladder(int index) {
  auto& slot = ladders_[index];
  if (!slot) {
    const auto& ex = examples_[index];
    slot = data::LadderFromPair(ex.mixture, ex.clean, ex.snr_db,
                                enh_.config().num_intermediate, cfg_.delta_snr_db);
  }
  return *slot;
}

double Trainer::PlLoss(const Batch& b, std::vector<std::pair<std::string, double>>& parts) {
  const double gamma = enh_.config().gamma;
  const double inv_b = 1.0 / static_cast<double>(b.index.size());
  const auto outs = enh_.model().Forward(Var(MixtureSpectra(b)));
  Var objective;
  double total = 0.0;
  for (size_t k = 0; k < outs.size(); ++k) {
    if (!outs[k].defined()) continue;
    Tensor grad(outs[k].shape());
    double stage_loss = 0.0;
    for (size_t i = 0; i < b.index.size(); ++i) {
      const auto& target = Ladder(b.index[i]).targets[k];
      const auto ref = loss::MakeTarget(Slice(target, b.offset[i], b.length), stft_, gamma);
      audio::CompressedSpectrum g;
      stage_loss += loss::LossOvrlCompressed(model::CompressedItem(outs[k].value(), i, gamma),
                                             ref, stft_, cfg_.loss, &g);
      model::SetCompressedItem(grad, static_cast<int>(i), g, inv_b);
    }
    stage_loss *= inv_b;
    parts.emplace_back("out" + std::to_string(k + 1), stage_loss);
    total += stage_loss;
    Var term = nn::WeightedSum(outs[k], grad);
    objective = objective.defined() ? nn::Add(objective, term) : term;
  }
  objective.Backward();
  return total;
}

double Trainer::PitchLoss(const Batch& b, std::vector<std::pair<std::string, double>>& parts) {
  const auto& mc = enh_.config();
  const int source = mc.PitchSourceStage();
  Tensor features;
  {
    nn::NoGradGuard no_grad;
    if (source == 0) {
      features = pitch::PitchFeatures(MixtureSpectra(b), 1.0);
    } else {
      const Var decoded = enh_.model().Decode(source, Var(FrozenStream(b, source)));
      features = pitch::PitchFeatures(decoded.value(), mc.gamma);
    }
  }
  const Var logits = enh_.pitch_estimator().Forward(Var(features), /*training=*/true);
  const std::int64_t per_item = logits.value().size() / logits.value().dim(0);
  const double inv_b = 1.0 / static_cast<double>(b.index.size());
  Tensor grad(logits.shape());
  double total = 0.0;
  std::vector<double> z(per_item), p(per_item), g;
  for (size_t i = 0; i < b.index.size(); ++i) {
    const float* row = logits.value().data() + i * per_item;
    std::copy_n(row, per_item, z.begin());
    std::copy_n(b.labels[i].values.begin(), per_item, p.begin());
    total += loss::LossPitchBceLogits(z, p, &g) * inv_b;
    for (std::int64_t j = 0; j < per_item; ++j)
      grad.data()[i * per_item + j] = static_cast<float>(g[j] * inv_b);
  }
  nn::WeightedSum(logits, grad).Backward();
  parts.emplace_back("bce", total);
  return total;
}

std::vector<std::vector<pitch::CombFilterSpec>> Trainer::PredictedPitch(
    const Batch& b, const Tensor& frozen, const Var& coarse) {
  const auto& mc = enh_.config();
  const int last = mc.num_blocks() - 1;
  const int source = mc.PitchSourceStage();
  // Only a source upstream of the trained block is frozen and cacheable.
  const bool cacheable = cfg_.cache_frozen && b.whole && source <= last;
  std::vector<std::vector<pitch::CombFilterSpec>> specs(b.index.size());
  bool hit = cacheable;
  for (size_t i = 0; hit && i < b.index.size(); ++i) hit = !pitch_cache_[b.index[i]].empty();
  if (hit) {
    for (size_t i = 0; i < b.index.size(); ++i) specs[i] = pitch_cache_[b.index[i]];
    return specs;
  }
  nn::NoGradGuard no_grad;
  Tensor src;
  double src_gamma = mc.gamma;
  if (source == 0) {
    src = MixtureSpectra(b);
    src_gamma = 1.0;
  } else if (source == last + 1) {
    src = coarse.value();
  } else if (source == last) {
    src = enh_.model().Decode(source, Var(frozen)).value();
  } else {
    src = enh_.model().Decode(source, Var(FrozenStream(b, source))).value();
  }
  const Var logits =
      enh_.pitch_estimator().Forward(Var(pitch::PitchFeatures(src, src_gamma)), false);
  for (size_t i = 0; i < b.index.size(); ++i) {
    specs[i] = pitch::DecodePitch(model::PosteriorItem(logits.value(), static_cast<int>(i)));
    if (cacheable) pitch_cache_[b.index[i]] = specs[i];
  }
  return specs;
}

double Trainer::HcLoss(const Batch& b, std::vector<std::pair<std::string, double>>& parts) {
  const auto& mc = enh_.config();
  const double gamma = mc.gamma;
  const int last = mc.num_blocks() - 1;
  const Tensor frozen = FrozenStream(b, last);
  const Var coarse = enh_.model().Decode(last + 1, enh_.model().Block(last, Var(frozen)));

  const double switch_at = (1.0 - cfg_.predicted_pitch_fraction) * total_steps();
  const bool predicted = static_cast<double>(step_) >= switch_at;
  std::vector<std::vector<pitch::CombFilterSpec>> specs;
  if (predicted) {
    specs = PredictedPitch(b, frozen, coarse);
  } else {
    for (const auto& labels : b.labels) specs.push_back(pitch::DecodePitch(labels));
  }
  std::vector<audio::ComplexSpectrogram> filtered;
  for (size_t i = 0; i < b.index.size(); ++i)
    filtered.push_back(pitch::ApplyPitchFilter(b.mixture[i], specs[i], stft_));
  const Var filtered_mag(model::StackMagnitudes(filtered));
  const Var mask = enh_.mask_module().Forward(coarse, filtered_mag);
  const Var out = hc::CompensateCompressed(mask, coarse, filtered_mag, gamma);

  const double inv_b = 1.0 / static_cast<double>(b.index.size());
  Tensor grad(out.shape());
  double total = 0.0;
  loss::LossBreakdown sum;
  for (size_t i = 0; i < b.index.size(); ++i) {
    const auto ref = loss::MakeTarget(b.clean[i], stft_, gamma);
    audio::CompressedSpectrum g;
    loss::LossBreakdown item;
    total += loss::LossOvrlCompressed(model::CompressedItem(out.value(), static_cast<int>(i), gamma),
                                      ref, stft_, cfg_.loss, &g, &item) * inv_b;
    sum.freq += item.freq * inv_b;
    sum.temp += item.temp * inv_b;
    model::SetCompressedItem(grad, static_cast<int>(i), g, inv_b);
  }
  nn::WeightedSum(out, grad).Backward();
  parts.emplace_back("freq", sum.freq);
  parts.emplace_back("temp", sum.temp);
  parts.emplace_back("predicted_pitch", predicted ? 1.0 : 0.0);
  return total;
}

StepRecord Trainer::Step() {
  if (finished()) throw std::logic_error("stage " + StageName(stage_) + " already finished");
  const Batch b = SampleBatch();
  auto& ps = enh_.params();
  ps.ZeroGrad();
  StepRecord rec;
  rec.stage = stage_;
  std::vector<std::pair<std::string, double>> parts;
  double total = 0.0;
  switch (stage_) {
    case Stage::kPl: total = PlLoss(b, parts); break;
    case Stage::kPitch: total = PitchLoss(b, parts); break;
    case Stage::kHc: total = HcLoss(b, parts); break;
  }
  if (!std::isfinite(total))
    throw NumericError("non-finite loss at " + StageName(stage_) + " step " + std::to_string(step_ + 1));
  rec.grad_norm = ClipGlobalNorm(ps, cfg_.clip_norm);
  if (!std::isfinite(rec.grad_norm))
    throw NumericError("non-finite gradient at " + StageName(stage_) + " step " +
                       std::to_string(step_ + 1));
  rec.lr = LrAtStep(step_ + 1, cfg_.warmup_steps, cfg_.lr_scale);
  adam_.Step(ps, rec.lr);
  ++step_;
  rec.step = step_;
  rec.epoch = static_cast<int>((step_ - 1) / cfg_.steps_per_epoch);
  rec.losses.emplace_back("total", total);
  rec.losses.insert(rec.losses.end(), parts.begin(), parts.end());
  if (finished()) completed_.insert(stage_);
  return rec;
}

model::Checkpoint Trainer::Snapshot() const {
  model::Checkpoint ckpt = ModelCheckpoint(enh_, completed_);
  std::ostringstream rng;
  rng << rng_;
  KeyValueConfig kv;
  cfg_.Write(kv);
  ckpt.meta["train"] = {{"stage", StageName(stage_)},
                        {"step", step_},
                        {"rng", rng.str()},
                        {"adam_steps", adam_.steps()},
                        {"config", kv.ToText()}};
  for (auto& t : adam_.Export()) ckpt.tensors.push_back(std::move(t));
  return ckpt;
}

void Trainer::Resume(const model::Checkpoint& ckpt) {
  const auto it = ckpt.meta.find("train");
  if (it == ckpt.meta.end() || !it->is_object() ||
      it->value("stage", std::string()) != StageName(stage_))
    throw DataError("checkpoint is not a snapshot of stage " + StageName(stage_));
  try {
    model::ImportParameters(enh_.params(), ckpt, /*require_all=*/true);
    step_ = it->at("step").get<std::int64_t>();
    std::istringstream rng(it->at("rng").get<std::string>());
    rng >> rng_;
    if (!rng) throw DataError("corrupt sampler state in checkpoint");
    adam_.Import(ckpt, it->at("adam_steps").get<std::int64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corrupt training state in checkpoint: ") + e.what());
  }
  for (Stage s : CompletedStages(ckpt)) completed_.insert(s);
  for (auto& s : stream_cache_) s.reset();
  for (auto& p : pitch_cache_) p.clear();
}

void Trainer::Run(std::ostream* log, const std::string& checkpoint_dir, std::int64_t max_steps) {
  namespace fs = std::filesystem;
  if (!checkpoint_dir.empty()) fs::create_directories(checkpoint_dir);
  while (!finished() && (max_steps < 0 || step_ < max_steps)) {
    const StepRecord rec = Step();
    if (log != nullptr) *log << rec.ToJson().dump() << '\n' << std::flush;
    if (checkpoint_dir.empty()) continue;
    if (step_ % cfg_.steps_per_epoch != 0 && !finished()) continue;
    const auto epoch = (step_ + cfg_.steps_per_epoch - 1) / cfg_.steps_per_epoch;
    const auto snap = Snapshot();
    const std::string name = StageName(stage_);
    model::WriteCheckpoint((fs::path(checkpoint_dir) / (name + "-epoch" + std::to_string(epoch) + ".ckpt")).string(), snap);
    model::WriteCheckpoint((fs::path(checkpoint_dir) / (name + ".ckpt")).string(), snap);
  }
}

std::set<Stage> CompletedStages(const model::Checkpoint& ckpt) {
  std::set<Stage> out;
  const auto it = ckpt.meta.find("completed");
  if (it == ckpt.meta.end()) return out;
  if (!it->is_array()) throw DataError("checkpoint 'completed' is not a list");
  for (const auto& name : *it) {
    if (!name.is_string()) throw DataError("checkpoint 'completed' holds a non-string");
    try {
      out.insert(ParseStage(name.get<std::string>()));
    } catch (const ConfigError& e) {
      throw DataError(e.what());
    }
  }
  return out;
}

model::ModelConfig CheckpointModelConfig(const model::Checkpoint& ckpt) {
  const auto it = ckpt.meta.find("model_config");
  if (it == ckpt.meta.end() || !it->is_string())
    throw DataError("checkpoint carries no model configuration");
  model::ModelConfig cfg;
  try {
    cfg.Read(KeyValueConfig::Parse(it->get<std::string>()));
  } catch (const ConfigError& e) {
    throw DataError(std::string("checkpoint model configuration: ") + e.what());
  }
  return cfg;
}

model::Checkpoint ModelCheckpoint(const model::SpeechEnhancer& enhancer,
                                  const std::set<Stage>& completed) {
  model::Checkpoint ckpt;
  ckpt.meta["model_config"] = ModelConfigText(enhancer.config());
  nlohmann::json names = nlohmann::json::array();
  for (Stage s : completed) names.push_back(StageName(s));
  ckpt.meta["completed"] = names;
  ckpt.tensors = model::ExportParameters(enhancer.params());
  return ckpt;
}

}  // namespace spse::train
