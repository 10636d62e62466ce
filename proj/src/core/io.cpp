#include "eigenshell/core/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace eigenshell {

static_assert(std::endian::native == std::endian::little,
              "the spectrum cache layout assumes a little-endian host");

namespace {

constexpr std::array<char, 8> kMagic = {'E', 'S', 'P', 'E', 'C', 'v', '1', '\0'};

template <class Scalar>
constexpr std::uint64_t scalar_kind() {
  return std::is_same_v<Scalar, double> ? 0 : 1;
}

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error("truncated header");
  return v;
}

template <class Scalar>
void store_impl(const std::filesystem::path& root, const std::filesystem::path& target,
                const SpectrumRecord<Scalar>& spectrum) {
  std::filesystem::create_directories(root);
  std::random_device rd;
  const auto tmp = target.string() + ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open cache file " + tmp);
    out.write(kMagic.data(), kMagic.size());
    write_u64(out, scalar_kind<Scalar>());
    write_u64(out, spectrum.energies.size());
    write_u64(out, spectrum.states.rows());
    write_u64(out, spectrum.states.cols());
    out.write(reinterpret_cast<const char*>(spectrum.energies.data()),
              static_cast<std::streamsize>(spectrum.energies.size() * sizeof(double)));
    using RowMajor = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const RowMajor rm = spectrum.states;
    out.write(reinterpret_cast<const char*>(rm.data()),
              static_cast<std::streamsize>(rm.size() * sizeof(Scalar)));
    if (!out) throw std::runtime_error("failed writing cache file " + tmp);
  }
  std::filesystem::rename(tmp, target);
}

template <class Scalar>
std::optional<SpectrumRecord<Scalar>> load_impl(const std::filesystem::path& file,
                                                std::string* warning) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw std::runtime_error("bad magic");
    if (read_u64(in) != scalar_kind<Scalar>()) throw std::runtime_error("scalar kind mismatch");
    const auto n = read_u64(in);
    const auto rows = read_u64(in);
    const auto cols = read_u64(in);
    const auto expected = 8 + 4 * 8 + n * sizeof(double) + rows * cols * sizeof(Scalar);
    if (std::filesystem::file_size(file) != expected) throw std::runtime_error("size mismatch");
    SpectrumRecord<Scalar> out;
    out.energies.resize(static_cast<Eigen::Index>(n));
    in.read(reinterpret_cast<char*>(out.energies.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    using RowMajor = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    RowMajor rm(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    in.read(reinterpret_cast<char*>(rm.data()),
            static_cast<std::streamsize>(rows * cols * sizeof(Scalar)));
    if (!in) throw std::runtime_error("truncated body");
    out.states = rm;
    return out;
  } catch (const std::exception& e) {
    if (warning != nullptr) *warning = "corrupt cache file " + file.string() + ": " + e.what();
    return std::nullopt;
  }
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return {buf.data(), end};
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("CsvTable: row has " + std::to_string(row.size()) +
                                " cells, expected " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

void CsvTable::add_numeric_row(const std::vector<double>& values) {
  std::vector<std::string> row;
  row.reserve(values.size());
  for (const double v : values) row.push_back(format_double(v));
  add_row(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  for (const auto& [key, value] : metadata) out << "# " << key << ": " << value << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return out.str();
}

void CsvTable::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << str();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

CsvTable ratio_curve_table(const RatioCurve& curve) {
  CsvTable t;
  t.metadata = curve.metadata;
  t.metadata.emplace_back("classifier", curve.classifier_name);
  t.columns = {curve.parameter_name, "f", "population", "empty"};
  for (const auto& s : curve.samples) {
    t.add_row({format_double(s.parameter), format_double(s.f), std::to_string(s.population),
               s.empty ? "1" : "0"});
  }
  return t;
}

std::string sha256_hex(std::string_view text) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

std::string cache_key(std::string_view canonical_parameters) {
  return sha256_hex(canonical_parameters);
}

SpectrumCache::SpectrumCache(std::filesystem::path root) : root_(std::move(root)) {}

SpectrumCache SpectrumCache::from_environment() {
  const char* env = std::getenv("EIGENSHELL_CACHE");
  return SpectrumCache(env != nullptr && *env != '\0' ? std::filesystem::path(env)
                                                      : std::filesystem::path(".eigenshell-cache"));
}

std::filesystem::path SpectrumCache::path_for(const std::string& key) const {
  return root_ / (key + ".spec");
}

std::optional<RealSpectrum> SpectrumCache::load_real(const std::string& key,
                                                     std::string* warning) const {
  return load_impl<double>(path_for(key), warning);
}

std::optional<ComplexSpectrum> SpectrumCache::load_complex(const std::string& key,
                                                           std::string* warning) const {
  return load_impl<Complex>(path_for(key), warning);
}

void SpectrumCache::store(const std::string& key, const RealSpectrum& spectrum) const {
  store_impl(root_, path_for(key), spectrum);
}

void SpectrumCache::store(const std::string& key, const ComplexSpectrum& spectrum) const {
  store_impl(root_, path_for(key), spectrum);
}

}  // namespace eigenshell
