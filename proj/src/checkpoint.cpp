#include "difnet/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "difnet/error.hpp"

namespace difnet {
namespace {

constexpr const char* kMagic = "difnet-checkpoint";
constexpr int kVersion = 1;

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw ParseError("checkpoint: bad number '" + s + "'");
  return v;
}

std::size_t parse_count(const std::string& s) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ParseError("checkpoint: bad count '" + s + "'");
  }
}

std::string next_line(std::istream& in, const char* expecting) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(std::string("checkpoint: truncated, expected ") + expecting);
  return line;
}

}  // namespace

Checkpoint snapshot(const NodeClassifier& model) {
  Checkpoint c;
  c.config = model.config();
  c.input_dim = model.input_dim();
  c.classes = model.class_count();
  for (const auto& p : model.parameters()) c.tensors.push_back({p.name, p.value.clone()});
  return c;
}

std::unique_ptr<NodeClassifier> restore(const Checkpoint& ckpt) {
  auto model = make_model(ckpt.config, ckpt.input_dim, ckpt.classes);
  std::map<std::string, const Tensor*> stored;
  for (const auto& t : ckpt.tensors) stored[t.name] = &t.value;
  for (auto& p : model->parameters()) {
    auto it = stored.find(p.name);
    if (it == stored.end()) throw ShapeError("checkpoint lacks parameter " + p.name);
    if (it->second->shape() != p.value.shape()) {
      throw ShapeError("checkpoint parameter " + p.name + " is " + to_string(it->second->shape()) +
                       ", model expects " + to_string(p.value.shape()));
    }
    auto src = it->second->values();
    auto dst = p.value.mutable_values();
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return model;
}

void write_checkpoint(std::ostream& out, const Checkpoint& c) {
  const auto& m = c.config;
  out << kMagic << ' ' << kVersion << '\n'
      << "model " << to_string(m.kind) << '\n'
      << "depth " << m.depth << '\n'
      << "hidden " << m.hidden << '\n'
      << "gdu " << to_string(m.gdu) << '\n'
      << "residual " << to_string(m.residual) << '\n'
      << "dropout " << hex(m.dropout) << '\n'
      << "seed " << m.seed << '\n'
      << "share_res " << (m.share_residual_projection ? 1 : 0) << '\n'
      << "dense_limit " << m.diffusion.dense_node_limit << '\n'
      << "input_dim " << c.input_dim << '\n'
      << "classes " << c.classes << '\n'
      << "tensors " << c.tensors.size() << '\n';
  for (const auto& t : c.tensors) {
    out << "tensor " << t.name << ' ' << t.value.rows() << ' ' << t.value.cols() << '\n';
    for (std::size_t r = 0; r < t.value.rows(); ++r) {
      for (std::size_t col = 0; col < t.value.cols(); ++col) {
        if (col > 0) out << ' ';
        out << hex(t.value(r, col));
      }
      out << '\n';
    }
  }
}

Checkpoint read_checkpoint(std::istream& in) {
  {
    std::istringstream head(next_line(in, "header"));
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kMagic) throw ParseError("not a difnet checkpoint");
    if (version != kVersion) throw ParseError("unsupported checkpoint version " + std::to_string(version));
  }

  std::map<std::string, std::string> fields;
  std::string line;
  for (;;) {
    line = next_line(in, "fields");
    std::istringstream kv(line);
    std::string key, value;
    kv >> key >> value;
    if (key == "tensors") break;
    fields[key] = value;
  }
  auto field = [&](const char* key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end()) throw ParseError(std::string("checkpoint: missing field ") + key);
    return it->second;
  };

  Checkpoint c;
  try {
    c.config.kind = parse_model_kind(field("model"));
    c.config.gdu = parse_gdu_variant(field("gdu"));
    c.config.residual = parse_residual_kind(field("residual"));
  } catch (const ContractError& e) {
    throw ParseError(std::string("checkpoint: ") + e.what());
  }
  c.config.depth = parse_count(field("depth"));
  c.config.hidden = parse_count(field("hidden"));
  c.config.dropout = parse_hex(field("dropout"));
  c.config.seed = parse_count(field("seed"));
  c.config.share_residual_projection = field("share_res") == "1";
  c.config.diffusion.dense_node_limit = parse_count(field("dense_limit"));
  c.input_dim = parse_count(field("input_dim"));
  c.classes = parse_count(field("classes"));

  std::string key, count;
  std::istringstream(line) >> key >> count;
  const std::size_t n = parse_count(count);
  for (std::size_t t = 0; t < n; ++t) {
    std::istringstream head(next_line(in, "tensor header"));
    std::string tag, name, rows_s, cols_s;
    head >> tag >> name >> rows_s >> cols_s;
    if (tag != "tensor") throw ParseError("checkpoint: expected tensor header, got '" + tag + "'");
    const std::size_t rows = parse_count(rows_s), cols = parse_count(cols_s);
    std::vector<double> values;
    values.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      std::istringstream row(next_line(in, "tensor row"));
      std::string tok;
      std::size_t seen = 0;
      while (row >> tok) {
        values.push_back(parse_hex(tok));
        ++seen;
      }
      if (seen != cols) throw ParseError("checkpoint: tensor " + name + " row " + std::to_string(r) + " has " +
                                         std::to_string(seen) + " values, expected " + std::to_string(cols));
    }
    c.tensors.push_back({name, Tensor(rows, cols, std::move(values), true)});
  }
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_checkpoint(out, ckpt);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace difnet
