// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "qfl/errors.hpp"

namespace qfl::cli {

using Json = nlohmann::ordered_json;

fhe::EncryptionParams EncryptionSection::params() const {
  return fhe::EncryptionParams::create(ring_degree, prime_bits, scale_bits);
}

namespace {

// Reads one JSON object, remembering which keys were consumed.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(name() + " must be an object");
  }
  ~Section() = default;

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(name(key) + " has the wrong type");
    }
  }

  void get_optional(const char* key, std::optional<double>& out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    double v = 0;
    get(key, v);
    out = v;
  }

  Section child(const char* key) {
    seen_.insert(key);
    static const Json empty = Json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, name(key));
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw ConfigError("unknown config key " + name(k.c_str()));
    }
  }

  std::string name(const char* key = nullptr) const {
    if (!key) return path_.empty() ? "config" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

qsim::Axis parse_axis(const std::string& s, const std::string& where) {
  if (s == "x" || s == "X") return qsim::Axis::kX;
  if (s == "y" || s == "Y") return qsim::Axis::kY;
  if (s == "z" || s == "Z") return qsim::Axis::kZ;
  throw ConfigError(where + ": unknown rotation axis '" + s + "'");
}

const char* axis_name(qsim::Axis a) {
  switch (a) {
    case qsim::Axis::kX: return "x";
    case qsim::Axis::kY: return "y";
    case qsim::Axis::kZ: return "z";
  }
  return "x";
}

Runner parse_runner(const std::string& s) {
  if (s == "inprocess") return Runner::kInProcess;
  if (s == "loopback") return Runner::kLoopback;
  if (s == "socket") return Runner::kSocket;
  throw ConfigError("federation.transport must be inprocess, loopback or socket, got '" + s + "'");
}

const char* runner_name(Runner r) {
  switch (r) {
    case Runner::kInProcess: return "inprocess";
    case Runner::kLoopback: return "loopback";
    case Runner::kSocket: return "socket";
  }
  return "inprocess";
}

federation::Mode parse_mode(const std::string& s) {
  if (s == "fhe") return federation::Mode::kFhe;
  if (s == "plaintext") return federation::Mode::kPlaintext;
  throw ConfigError("mode must be fhe or plaintext, got '" + s + "'");
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  Section root(j, "");
  std::string mode = federation::to_string(c.mode);
  root.get("mode", mode);
  c.mode = parse_mode(mode);
  root.get("seed", c.seed);

  {
    auto s = root.child("encryption");
    auto& e = c.encryption;
    s.get("ring_degree", e.ring_degree);
    s.get("prime_bits", e.prime_bits);
    s.get("scale_bits", e.scale_bits);
    s.get("rotation_steps", e.rotation_steps);
    s.get("key_dir", e.key_dir);
    s.get("keygen_seed", e.keygen_seed);
    s.finish();
  }
  {
    auto s = root.child("federation");
    auto& f = c.federation;
    s.get("clients", f.clients);
    s.get("rounds", f.rounds);
    s.get("epochs_per_round", f.epochs_per_round);
    s.get("learning_rate", f.learning_rate);
    s.get("batch_size", f.batch_size);
    s.get_optional("loss_delta", f.loss_delta);
    std::string runner = runner_name(f.runner);
    s.get("transport", runner);
    f.runner = parse_runner(runner);
    s.get("receive_timeout_ms", f.receive_timeout_ms);
    auto q = s.child("quantization");
    q.get("fractional_bits", f.quantization.fractional_bits);
    q.get("clip_range", f.quantization.clip_range);
    q.finish();
    s.finish();
  }
  {
    auto s = root.child("model");
    auto& m = c.model;
    s.get("qubits", m.qubits);
    s.get("depth", m.depth);
    std::vector<std::string> axes;
    s.get("layer_axes", axes);
    for (const auto& a : axes) m.layer_axes.push_back(parse_axis(a, "model.layer_axes"));
    s.get("readout", m.readout);
    s.get("init_seed", m.init_seed);
    s.finish();
  }
  {
    auto s = root.child("data");
    auto& d = c.data;
    s.get("source", d.source);
    s.get("kind", d.kind);
    s.get("samples", d.samples);
    s.get("noise", d.noise);
    s.get("classes", d.classes);
    s.get("dims", d.dims);
    s.get("test_fraction", d.test_fraction);
    s.get("seed", d.seed);
    s.get("path", d.path);
    s.get("label_column", d.label_column);
    auto p = s.child("partition");
    std::string strategy = "iid";
    p.get("strategy", strategy);
    if (strategy == "iid") {
      d.strategy = data::PartitionStrategy::kIid;
    } else if (strategy == "dirichlet") {
      d.strategy = data::PartitionStrategy::kDirichlet;
    } else {
      throw ConfigError("data.partition.strategy must be iid or dirichlet, got '" + strategy + "'");
    }
    p.get("alpha", d.alpha);
    p.get("seed", d.partition_seed);
    p.finish();
    s.finish();
  }
  {
    auto s = root.child("output");
    auto& o = c.output;
    s.get("metrics", o.metrics);
    s.get("checkpoint", o.checkpoint);
    s.get("report", o.report);
    s.get("data_csv", o.data_csv);
    s.get("wall_time", o.wall_time);
    s.finish();
  }
  root.finish();
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json(const RunConfig& c) {
  Json j;
  j["mode"] = federation::to_string(c.mode);
  j["seed"] = c.seed;
  const auto& e = c.encryption;
  j["encryption"] = {{"ring_degree", e.ring_degree}, {"prime_bits", e.prime_bits},
                     {"scale_bits", e.scale_bits},   {"rotation_steps", e.rotation_steps},
                     {"key_dir", e.key_dir},         {"keygen_seed", e.keygen_seed}};
  const auto& f = c.federation;
  j["federation"] = {{"clients", f.clients},
                     {"rounds", f.rounds},
                     {"epochs_per_round", f.epochs_per_round},
                     {"learning_rate", f.learning_rate},
                     {"batch_size", f.batch_size},
                     {"loss_delta", f.loss_delta ? Json(*f.loss_delta) : Json(nullptr)},
                     {"transport", runner_name(f.runner)},
                     {"receive_timeout_ms", f.receive_timeout_ms},
                     {"quantization",
                      {{"fractional_bits", f.quantization.fractional_bits},
                       {"clip_range", f.quantization.clip_range}}}};
  std::vector<std::string> axes;
  for (auto a : c.model.layer_axes) axes.push_back(axis_name(a));
  j["model"] = {{"qubits", c.model.qubits},
                {"depth", c.model.depth},
                {"layer_axes", axes},
                {"readout", c.model.readout},
                {"init_seed", c.model.init_seed}};
  const auto& d = c.data;
  j["data"] = {{"source", d.source},
               {"kind", d.kind},
               {"samples", d.samples},
               {"noise", d.noise},
               {"classes", d.classes},
               {"dims", d.dims},
               {"test_fraction", d.test_fraction},
               {"seed", d.seed},
               {"path", d.path},
               {"label_column", d.label_column},
               {"partition",
                {{"strategy", d.strategy == data::PartitionStrategy::kIid ? "iid" : "dirichlet"},
                 {"alpha", d.alpha},
                 {"seed", d.partition_seed}}}};
  const auto& o = c.output;
  j["output"] = {{"metrics", o.metrics},
                 {"checkpoint", o.checkpoint},
                 {"report", o.report},
                 {"data_csv", o.data_csv},
                 {"wall_time", o.wall_time}};
  return j.dump(2) + "\n";
}

void RunConfig::validate() const {
  try {
    fhe::EncryptionParams p = encryption.params();
    for (auto s : encryption.rotation_steps) {
      if (s < 1 || s >= p.slot_count()) {
        throw ConfigError("encryption.rotation_steps entries must lie in [1, " +
                          std::to_string(p.slot_count()) + ")");
      }
    }
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("encryption: ") + e.what());
  }
  if (encryption.key_dir.empty()) throw ConfigError("encryption.key_dir must not be empty");

  const auto& f = federation;
  if (f.clients < 1) throw ConfigError("federation.clients must be at least 1");
  if (f.rounds < 0 || f.rounds > 65535) throw ConfigError("federation.rounds must lie in [0, 65535]");
  if (f.epochs_per_round < 0) throw ConfigError("federation.epochs_per_round must be non-negative");
  if (!(f.learning_rate >= 0) || !std::isfinite(f.learning_rate)) {
    throw ConfigError("federation.learning_rate must be finite and non-negative");
  }
  if (f.batch_size < 1) throw ConfigError("federation.batch_size must be at least 1");
  if (f.loss_delta && !(*f.loss_delta > 0)) throw ConfigError("federation.loss_delta must be positive");
  if (f.receive_timeout_ms < 1) throw ConfigError("federation.receive_timeout_ms must be positive");
  try {
    f.quantization.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("federation.") + e.what());
  }

  qsim::PqcArchitecture arch{model.qubits, model.depth, model.layer_axes, model.readout};
  try {
    arch.validate();
  } catch (const ShapeError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }

  const auto& d = data;
  if (d.source == "synthetic") {
    try {
      const auto kind = data::parse_synthetic_kind(d.kind);
      if (kind != data::SyntheticKind::kBlobs && d.classes != 0 && d.classes != 2) {
        throw ConfigError("data.classes: " + d.kind + " has exactly two classes");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("data.kind: ") + e.what());
    }
    if (d.samples < 2) throw ConfigError("data.samples must be at least 2");
    if (!(d.noise >= 0) || !std::isfinite(d.noise)) throw ConfigError("data.noise must be non-negative");
    if (d.classes < 0 || d.classes == 1) throw ConfigError("data.classes must be 0 (default) or >= 2");
    if (d.dims < 2) throw ConfigError("data.dims must be at least 2");
  } else if (d.source == "csv") {
    if (d.path.empty()) throw ConfigError("data.path is required for csv sources");
    if (d.label_column.empty()) throw ConfigError("data.label_column must not be empty");
  } else {
    throw ConfigError("data.source must be synthetic or csv, got '" + d.source + "'");
  }
  if (!(d.test_fraction > 0 && d.test_fraction < 1)) {
    throw ConfigError("data.test_fraction must lie in (0, 1)");
  }
  if (d.strategy == data::PartitionStrategy::kDirichlet && !(d.alpha > 0)) {
    throw ConfigError("data.partition.alpha must be positive");
  }
  if (output.metrics.empty()) throw ConfigError("output.metrics must not be empty");
  if (output.checkpoint.empty()) throw ConfigError("output.checkpoint must not be empty");
}

void apply_override(std::string& json_text, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  Json j;
  try {
    j = json_text.empty() ? Json::object() : Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Json value;
  try {
    value = Json::parse(raw);
  } catch (const nlohmann::json::parse_error&) {
    value = raw;
  }
  std::string pointer;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    pointer += "/" + part;
  }
  try {
    j[Json::json_pointer(pointer)] = value;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot apply override '" + key + "': " + e.what());
  }
  json_text = j.dump();
}

PreparedData prepare_data(const RunConfig& c) {
  PreparedData out;
  const auto& d = c.data;
  if (d.source == "synthetic") {
    data::SyntheticOptions opt;
    opt.class_count = d.classes;
    opt.dims = d.dims;
    opt.test_fraction = d.test_fraction;
    out.split = data::generate_synthetic(d.kind, d.samples, d.noise, d.seed, opt);
  } else {
    out.split = data::stratified_split(data::load_csv(d.path, d.label_column), d.test_fraction, d.seed);
  }
  data::PartitionSpec ps;
  ps.client_count = static_cast<std::size_t>(c.federation.clients);
  ps.strategy = d.strategy;
  ps.alpha = d.alpha;
  ps.rng_seed = d.partition_seed;
  out.clients = data::partition(out.split.train, ps);
  return out;
}

model::ModelShape model_shape(const RunConfig& c, const data::Dataset& train) {
  model::ModelShape s;
  s.feature_count = static_cast<int>(train.dims());
  s.class_count = train.class_count;
  s.pqc = qsim::PqcArchitecture{c.model.qubits, c.model.depth, c.model.layer_axes, c.model.readout};
  s.validate();
  return s;
}

federation::RoundConfig round_config(const RunConfig& c, const std::vector<data::Dataset>& clients) {
  federation::RoundConfig r;
  r.client_count = c.federation.clients;
  r.rounds = c.federation.rounds;
  for (const auto& d : clients) r.sample_counts.push_back(d.size());
  r.training.learning_rate = c.federation.learning_rate;
  r.training.batch_size = c.federation.batch_size;
  r.training.epochs_per_round = c.federation.epochs_per_round;
  r.convergence.loss_delta = c.federation.loss_delta;
  r.seed = c.seed;
  return r;
}

}  // namespace qfl::cli
