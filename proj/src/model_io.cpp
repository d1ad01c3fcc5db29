#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rnd/estimator.hpp"

namespace rnd {

namespace {

constexpr int kFormatVersion = 1;

// Decimal serialization with 17 significant digits: enough for strtod to
// reconstruct every double bit-for-bit, portable across endianness.
std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix(std::ostringstream& out, const Matrix& m) {
  out << "[";
  for (Index i = 0; i < m.rows(); ++i) {
    if (i > 0) out << ",";
    out << "[";
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ",";
      out << num(m(i, j));
    }
    out << "]";
  }
  out << "]";
}

void write_vector(std::ostringstream& out, const Vector& v) {
  out << "[";
  for (Index i = 0; i < v.size(); ++i) {
    if (i > 0) out << ",";
    out << num(v(i));
  }
  out << "]";
}

Matrix read_matrix(const nlohmann::json& j, Index expected_cols) {
  if (!j.is_array()) throw std::runtime_error("model: center list must be an array");
  const Index rows = static_cast<Index>(j.size());
  Matrix m(rows, rows > 0 ? static_cast<Index>(j.at(0).size()) : expected_cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Index>(row.size()) != m.cols())
      throw std::runtime_error("model: ragged center rows");
    for (Index k = 0; k < m.cols(); ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
  }
  if (m.cols() != expected_cols) throw std::runtime_error("model: center dimension mismatch");
  return m;
}

}  // namespace

std::string model_to_json(const RatioModel& model) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"format_version\": " << kFormatVersion << ",\n";
  out << "  \"kernel\": {\"family\": \"" << family_name(model.kernel.family) << "\", \"params\": {";
  switch (model.kernel.family) {
    case KernelFamily::gaussian:
    case KernelFamily::laplacian:
      out << "\"bandwidth\": " << num(model.kernel.bandwidth);
      break;
    case KernelFamily::polynomial:
      out << "\"degree\": " << model.kernel.degree << ", \"offset\": " << num(model.kernel.offset)
          << ", \"domain_radius\": " << num(model.kernel.domain_radius);
      break;
  }
  out << "}, \"d\": " << model.kernel.dim << "},\n";
  out << "  \"alpha\": " << num(model.alpha) << ",\n";
  out << "  \"n_full\": " << model.n_full << ",\n";
  out << "  \"m_full\": " << model.m_full << ",\n";
  out << "  \"mode\": \"" << (model.mode == FitMode::full ? "full" : "nystrom") << "\",\n";
  out << "  \"p_centers\": ";
  write_matrix(out, model.p_centers);
  out << ",\n  \"q_centers\": ";
  write_matrix(out, model.q_centers);
  out << ",\n  \"c\": ";
  write_vector(out, model.c);
  out << ",\n  \"c_prime_scalar\": " << num(model.c_prime) << "\n";
  out << "}\n";
  return out.str();
}

RatioModel model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model: malformed JSON: ") + e.what());
  }
  if (!j.contains("format_version"))
    throw std::runtime_error("model: missing format_version");
  const int version = j.at("format_version").get<int>();
  if (version != kFormatVersion)
    throw std::runtime_error("model: unsupported format_version " + std::to_string(version));

  RatioModel model;
  const auto& jk = j.at("kernel");
  const KernelFamily family = family_from_name(jk.at("family").get<std::string>());
  const Index d = jk.at("d").get<Index>();
  const auto& params = jk.at("params");
  switch (family) {
    case KernelFamily::gaussian:
      model.kernel = KernelSpec::gaussian(d, params.at("bandwidth").get<double>());
      break;
    case KernelFamily::laplacian:
      model.kernel = KernelSpec::laplacian(d, params.at("bandwidth").get<double>());
      break;
    case KernelFamily::polynomial:
      model.kernel = KernelSpec::polynomial(d, params.at("degree").get<int>(),
                                            params.at("offset").get<double>(),
                                            params.at("domain_radius").get<double>());
      break;
  }
  model.alpha = j.at("alpha").get<double>();
  model.n_full = j.at("n_full").get<std::int64_t>();
  model.m_full = j.at("m_full").get<std::int64_t>();
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "full")
    model.mode = FitMode::full;
  else if (mode == "nystrom")
    model.mode = FitMode::nystrom;
  else
    throw std::runtime_error("model: unknown mode '" + mode + "'");
  model.p_centers = read_matrix(j.at("p_centers"), d);
  model.q_centers = read_matrix(j.at("q_centers"), d);
  const auto& jc = j.at("c");
  model.c.resize(static_cast<Index>(jc.size()));
  for (Index i = 0; i < model.c.size(); ++i)
    model.c(i) = jc.at(static_cast<std::size_t>(i)).get<double>();
  model.c_prime = j.at("c_prime_scalar").get<double>();

  if (model.c.size() != model.p_centers.rows())
    throw std::runtime_error("model: coefficient count does not match p centers");
  if (!(model.alpha > 0.0)) throw std::runtime_error("model: alpha must be positive");
  return model;
}

void save_model(const RatioModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("model: cannot open '" + path + "' for writing");
  out << model_to_json(model);
  if (!out) throw std::runtime_error("model: write to '" + path + "' failed");
}

RatioModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("model: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace rnd
