#include "rnd/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rnd {

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

double to_double(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + text + "'");
  }
}

std::int64_t to_int(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" + text + "'");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string current;
  for (const char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!current.empty()) items.push_back(current);
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) items.push_back(current);
  return items;
}

std::vector<Index> to_index_list(const std::string& text, const std::string& key) {
  std::vector<Index> out;
  for (const auto& item : split_list(text)) out.push_back(static_cast<Index>(to_int(item, key)));
  if (out.empty()) throw std::invalid_argument("config: key '" + key + "' expects a list");
  return out;
}

}  // namespace

SubsampleRule SubsampleRule::parse(const std::string& text) {
  SubsampleRule rule;
  if (text == "auto") {
    rule.kind = Kind::automatic;
    return rule;
  }
  if (text.find('.') != std::string::npos) {
    rule.kind = Kind::fraction;
    rule.fraction = to_double(text, "subsample");
    if (!(rule.fraction > 0.0) || !(rule.fraction < 1.0))
      throw std::invalid_argument("config: subsample fraction must lie in (0, 1)");
    return rule;
  }
  rule.kind = Kind::fixed;
  rule.fixed = static_cast<Index>(to_int(text, "subsample"));
  if (rule.fixed < 1) throw std::invalid_argument("config: subsample size must be positive");
  return rule;
}

KernelSpec RunConfig::kernel() const {
  switch (kernel_family) {
    case KernelFamily::gaussian:
      return KernelSpec::gaussian(d, bandwidth);
    case KernelFamily::laplacian:
      return KernelSpec::laplacian(d, bandwidth);
    case KernelFamily::polynomial:
      return KernelSpec::polynomial(d, poly_degree, poly_offset, poly_radius);
  }
  throw std::logic_error("config: unknown kernel family");
}

SyntheticPair RunConfig::pair() const {
  return SyntheticPair::gauss_scale(d, sigma_q, sigma_p);
}

void apply_config_line(RunConfig& cfg, const std::string& section, const std::string& key,
                       const std::string& value) {
  const std::string where = section.empty() ? key : section + "." + key;
  if (section == "kernel") {
    if (key == "family") { cfg.kernel_family = family_from_name(value); return; }
    if (key == "bandwidth") { cfg.bandwidth = to_double(value, where); return; }
    if (key == "degree") { cfg.poly_degree = static_cast<int>(to_int(value, where)); return; }
    if (key == "offset") { cfg.poly_offset = to_double(value, where); return; }
    if (key == "domain_radius") { cfg.poly_radius = to_double(value, where); return; }
  } else if (section == "pair") {
    if (key == "sigma_p") { cfg.sigma_p = to_double(value, where); return; }
    if (key == "sigma_q") { cfg.sigma_q = to_double(value, where); return; }
    if (key == "d") { cfg.d = static_cast<Index>(to_int(value, where)); return; }
  } else if (section == "selection") {
    if (key == "s") { cfg.policy.indices.s = to_double(value, where); return; }
    if (key == "r") { cfg.policy.indices.r = to_double(value, where); return; }
    if (key == "delta") { cfg.policy.delta = to_double(value, where); return; }
    if (key == "c_sub") { cfg.policy.c_subsample = to_double(value, where); return; }
    if (key == "regime") {
      if (value == "in_rkhs") { cfg.policy.indices.regime = Regime::in_rkhs; return; }
      if (value == "out_of_rkhs") { cfg.policy.indices.regime = Regime::out_of_rkhs; return; }
      throw std::invalid_argument("config: regime must be in_rkhs or out_of_rkhs");
    }
  } else if (section == "grid") {
    if (key == "sizes") { cfg.grid_sizes = to_index_list(value, where); return; }
    if (key == "seeds") {
      cfg.seeds.clear();
      for (const auto& item : split_list(value))
        cfg.seeds.push_back(static_cast<std::uint64_t>(to_int(item, where)));
      if (cfg.seeds.empty()) throw std::invalid_argument("config: seeds list is empty");
      return;
    }
  } else if (section == "bench") {
    if (key == "nystrom_sizes") { cfg.bench_nystrom_sizes = to_index_list(value, where); return; }
    if (key == "full_sizes") { cfg.bench_full_sizes = to_index_list(value, where); return; }
  } else if (section == "run") {
    if (key == "mc_points") { cfg.mc_points = static_cast<Index>(to_int(value, where)); return; }
    if (key == "capacity_probe") { cfg.capacity_probe = static_cast<Index>(to_int(value, where)); return; }
    if (key == "subsample") { cfg.subsample = SubsampleRule::parse(value); return; }
    if (key == "mode") {
      if (value != "nystrom" && value != "full")
        throw std::invalid_argument("config: mode must be nystrom or full");
      cfg.mode = value;
      return;
    }
    if (key == "seed") { cfg.seed = static_cast<std::uint64_t>(to_int(value, where)); return; }
    if (key == "out") { cfg.out_dir = value; return; }
    if (key == "effdim_grid") { cfg.effdim_grid = static_cast<Index>(to_int(value, where)); return; }
  }
  throw std::invalid_argument("config: unknown key '" + where + "'");
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config: malformed section header at line " +
                                 std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key = value at line " + std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error("config: empty key or value at line " + std::to_string(line_no));
    apply_config_line(base, section, key, value);
  }
  return base;
}

}  // namespace rnd
