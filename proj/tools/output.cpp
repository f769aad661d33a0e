#include "output.hpp"

#include "pdpml/format.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pdpml::cli {

namespace {

std::string header(const RealField& u, double h, double t) {
  return std::to_string(u.rows()) + ' ' + std::to_string(u.cols()) + ' ' + format_double(h) + ' ' +
         format_double(t) + '\n';
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
  double x = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw std::runtime_error(path.string() + ": bad number '" + s + "'");
  return x;
}

struct Header {
  long nx = 0, ny = 0;
  double h = 0.0, t = 0.0;
};

Header parse_header(const std::string& line, const std::filesystem::path& path) {
  std::istringstream is(line);
  std::string a, b, c, d, extra;
  if (!(is >> a >> b >> c >> d) || (is >> extra))
    throw std::runtime_error(path.string() + ": header must be 'nx ny h t'");
  Header hd;
  hd.nx = std::stol(a);
  hd.ny = std::stol(b);
  hd.h = parse_double(c, path);
  hd.t = parse_double(d, path);
  if (hd.nx < 1 || hd.ny < 1) throw std::runtime_error(path.string() + ": empty field");
  return hd;
}

}  // namespace

void write_dump(const std::filesystem::path& path, const RealField& u, double h, double t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << header(u, h, t);
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    for (Eigen::Index i = 0; i < u.rows(); ++i) os << (i ? " " : "") << format_double(u(i, j));
    os << '\n';
  }
  if (!os) throw std::runtime_error("error writing " + path.string());
}

void write_dump_binary(const std::filesystem::path& bin, const RealField& u, double h, double t) {
  static_assert(std::endian::native == std::endian::little, "binary dumps assume a little-endian host");
  std::filesystem::path hdr = bin;
  hdr.replace_extension(".hdr");
  {
    std::ofstream os(hdr, std::ios::binary);
    os << header(u, h, t);
    if (!os) throw std::runtime_error("cannot write " + hdr.string());
  }
  std::ofstream os(bin, std::ios::binary);
  // Eigen storage is column-major in (i1, i2): i1 runs fastest, as in the text rows
  os.write(reinterpret_cast<const char*>(u.data()), static_cast<std::streamsize>(u.size() * sizeof(double)));
  if (!os) throw std::runtime_error("cannot write " + bin.string());
}

Dump read_dump(const std::filesystem::path& path) {
  Dump d;
  if (path.extension() == ".bin") {
    std::filesystem::path hdr = path;
    hdr.replace_extension(".hdr");
    std::ifstream hs(hdr);
    std::string line;
    if (!hs || !std::getline(hs, line)) throw std::runtime_error("cannot read " + hdr.string());
    const Header hd = parse_header(line, hdr);
    d.h = hd.h;
    d.t = hd.t;
    d.u.resize(hd.nx, hd.ny);
    std::ifstream is(path, std::ios::binary);
    is.read(reinterpret_cast<char*>(d.u.data()), static_cast<std::streamsize>(d.u.size() * sizeof(double)));
    if (!is || is.peek() != std::char_traits<char>::eof())
      throw std::runtime_error(path.string() + ": size does not match its header");
    return d;
  }
  std::ifstream is(path);
  std::string line;
  if (!is || !std::getline(is, line)) throw std::runtime_error("cannot read " + path.string());
  const Header hd = parse_header(line, path);
  d.h = hd.h;
  d.t = hd.t;
  d.u.resize(hd.nx, hd.ny);
  for (long j = 0; j < hd.ny; ++j) {
    if (!std::getline(is, line)) throw std::runtime_error(path.string() + ": missing rows");
    std::istringstream row(line);
    std::string v;
    for (long i = 0; i < hd.nx; ++i) {
      if (!(row >> v)) throw std::runtime_error(path.string() + ": short row " + std::to_string(j + 1));
      d.u(i, j) = parse_double(v, path);
    }
    if (row >> v) throw std::runtime_error(path.string() + ": long row " + std::to_string(j + 1));
  }
  return d;
}

Manifest::Manifest(std::filesystem::path dir, std::string command, std::string config_text)
    : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
  j_["version"] = PDPML_VERSION;
  j_["command"] = std::move(command);
  j_["config"] = std::move(config_text);
  j_["timings"] = nlohmann::json::object();
  j_["outputs"] = nlohmann::json::array();
  j_["info"] = nlohmann::json::object();
  j_["status"] = "running";
  write();
}

std::filesystem::path Manifest::output(const std::string& name) {
  j_["outputs"].push_back(name);
  write();
  return dir_ / name;
}

void Manifest::timing(const std::string& phase, double seconds) {
  j_["timings"][phase] = std::round(seconds * 1000.0) / 1000.0;
  write();
}

void Manifest::info(const std::string& key, nlohmann::json value) {
  j_["info"][key] = std::move(value);
  write();
}

void Manifest::finish(bool ok, const std::string& error) {
  j_["status"] = ok ? "ok" : "error";
  if (!ok) j_["error"] = error;
  write();
}

void Manifest::write() const {
  std::ofstream os(dir_ / "manifest.json");
  os << j_.dump(2) << '\n';
}

}  // namespace pdpml::cli
