#include "gfdeconv/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"

namespace gfd {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Shortest representation that parses back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token, const std::string& path) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw std::invalid_argument("malformed numeric field in " + path + ": '" +
                                std::string(token) + "'");
  return v;
}

constexpr const char* kSampleHeader = "x,y,z,xstar,u,ux,uy";

}  // namespace

void write_samples_csv(const std::string& path, std::span<const ModelSample> data) {
  std::string text;
  text.reserve(64 * (data.size() + 1));
  text += kSampleHeader;
  text += '\n';
  for (const auto& s : data) {
    text += fmt(s.x);
    text += ',';
    text += fmt(s.y);
    text += ',';
    text += fmt(s.z);
    text += ',';
    text += fmt(s.xstar);
    text += ',';
    text += fmt(s.u);
    text += ',';
    text += fmt(s.ux);
    text += ',';
    text += fmt(s.uy);
    text += '\n';
  }
  write_text(path, text);
}

std::vector<ModelSample> read_samples_csv(const std::string& path) {
  const std::string text = read_text(path);
  std::vector<ModelSample> out;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    if (first) {
      if (line != kSampleHeader)
        throw std::invalid_argument("unexpected dataset header in " + path);
      first = false;
      continue;
    }
    double fields[7];
    std::size_t start = 0;
    for (int i = 0; i < 7; ++i) {
      std::size_t comma = line.find(',', start);
      const bool last_field = i == 6;
      if (last_field != (comma == std::string_view::npos))
        throw std::invalid_argument("wrong dataset column count in " + path);
      const std::size_t end = last_field ? line.size() : comma;
      fields[i] = parse_double(line.substr(start, end - start), path);
      start = end + 1;
    }
    out.push_back({fields[0], fields[1], fields[2], fields[3], fields[4],
                   fields[5], fields[6]});
  }
  if (first) throw std::invalid_argument("empty dataset file: " + path);
  return out;
}

void write_gridded_csv(const std::string& path, const GriddedFunction& f) {
  if (f.grid.dim() != 1)
    throw std::invalid_argument("write_gridded_csv: grid must be 1-d");
  std::string text = "node,re,im\n";
  for (std::size_t j = 0; j < f.grid.points(); ++j) {
    text += fmt(f.grid.node(j));
    text += ',';
    text += fmt(f.values[j].real());
    text += ',';
    text += fmt(f.values[j].imag());
    text += '\n';
  }
  write_text(path, text);
}

std::string gf_to_json_text(const GeneralizedFunction& b) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  const Grid* grid = nullptr;
  if (b.regular.has_value()) grid = &b.regular->grid;
  if (grid != nullptr)
    j["grid"] = {{"L", grid->half_width()},
                 {"N", grid->points()},
                 {"dim", grid->dim()}};
  else
    j["grid"] = nullptr;
  if (b.regular.has_value()) {
    std::vector<double> re, im;
    re.reserve(b.regular->values.size());
    im.reserve(b.regular->values.size());
    for (const auto& v : b.regular->values) {
      re.push_back(v.real());
      im.push_back(v.imag());
    }
    j["regular"] = {{"re", std::move(re)}, {"im", std::move(im)}};
  } else {
    j["regular"] = nullptr;
  }
  auto atoms = ordered_json::array();
  for (const auto& a : b.atoms) {
    ordered_json ja;
    ja["location"] = a.location;
    ja["weight"] = {{"re", a.weight.real()}, {"im", a.weight.imag()}};
    ja["order"] = a.order;
    atoms.push_back(std::move(ja));
  }
  j["atoms"] = std::move(atoms);
  return j.dump(2) + "\n";
}

GeneralizedFunction gf_from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("bad gf JSON: ") + e.what());
  }
  if (!j.contains("schema") || !j["schema"].is_number_integer() ||
      j["schema"].get<int>() != kSchemaVersion)
    throw std::invalid_argument("gf JSON: missing or unsupported schema version");

  GeneralizedFunction out;
  if (j.contains("regular") && !j["regular"].is_null()) {
    if (!j.contains("grid") || j["grid"].is_null())
      throw std::invalid_argument("gf JSON: regular part without a grid");
    const auto& jg = j["grid"];
    Grid grid(jg.at("L").get<double>(), jg.at("N").get<std::size_t>(),
              jg.at("dim").get<int>());
    const auto re = j["regular"].at("re").get<std::vector<double>>();
    const auto im = j["regular"].at("im").get<std::vector<double>>();
    if (re.size() != grid.size() || im.size() != grid.size())
      throw std::invalid_argument("gf JSON: regular arrays do not match the grid");
    GriddedFunction f(grid);
    for (std::size_t i = 0; i < re.size(); ++i) f.values[i] = cplx(re[i], im[i]);
    out.regular = std::move(f);
  }
  if (j.contains("atoms")) {
    for (const auto& ja : j["atoms"]) {
      Atom a;
      a.location = ja.at("location").get<std::vector<double>>();
      a.weight = cplx(ja.at("weight").at("re").get<double>(),
                      ja.at("weight").at("im").get<double>());
      a.order = ja.at("order").get<std::vector<int>>();
      out.atoms.push_back(std::move(a));
    }
  }
  if (!out.regular.has_value() && out.atoms.empty())
    throw std::invalid_argument("gf JSON: neither regular part nor atoms");
  return out;
}

void write_gf_json(const std::string& path, const GeneralizedFunction& b) {
  write_text(path, gf_to_json_text(b));
}

GeneralizedFunction read_gf_json(const std::string& path) {
  return gf_from_json_text(read_text(path));
}

}  // namespace gfd
