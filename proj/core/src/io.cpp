// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include "sapteve/io.hpp"

#include <algorithm>
#include <bit>
#include <boost/crc.hpp>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <regex>
#include <sstream>

namespace sapteve {
namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kArchiveMagic = "SAPTEVE-ARCHIVE\n";
constexpr std::string_view kFactorMagic = "SAPTEVE-FACTORS\n";
constexpr std::size_t kHeaderBytes = 16 + 8;

[[noreturn]] void fail(ArchiveErrorCode code, const std::string& what) {
  throw ArchiveError(code, what);
}

std::uint64_t byteswap64(std::uint64_t x) {
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((x >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

void put_u64(std::string& out, std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::big) x = byteswap64(x);
  char buf[8];
  std::memcpy(buf, &x, 8);
  out.append(buf, 8);
}

std::uint64_t get_u64(const char* p) {
  std::uint64_t x = 0;
  std::memcpy(&x, p, 8);
  if constexpr (std::endian::native == std::endian::big) x = byteswap64(x);
  return x;
}

void put_f64(std::string& out, double d) { put_u64(out, std::bit_cast<std::uint64_t>(d)); }
double get_f64(const char* p) { return std::bit_cast<double>(get_u64(p)); }

/** @brief Parsed manifest plus decoded arrays of a container file. */
struct Container {
  json manifest;
  std::map<std::string, ArchiveArray> arrays;
};

std::string write_container(std::string_view magic, json manifest,
                            const std::map<std::string, ArchiveArray>& arrays) {
  std::string payload;
  json table = json::object();
  for (const auto& [name, a] : arrays) {
    if (a.data.size() != a.element_count())
      fail(ArchiveErrorCode::kShape,
           fmt::format("array '{}' holds {} values for {} shape entries", name, a.data.size(),
                       a.element_count()));
    table[name] = {{"dtype", "float64"}, {"shape", a.shape}, {"offset", payload.size()}};
    for (double d : a.data) put_f64(payload, d);
  }
  manifest["payload"] = {{"bytes", payload.size()}, {"crc32", crc32(payload)}};
  manifest["arrays"] = std::move(table);
  const std::string text = manifest.dump(1);
  std::string out(magic);
  put_u64(out, text.size());
  out += text;
  out += payload;
  return out;
}

template <class T>
T field(const json& j, const char* key, const char* where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ArchiveErrorCode::kSchema, fmt::format("{}: missing or invalid field '{}'", where, key));
  }
}

Container read_container(const std::string& bytes, std::string_view magic, const char* what) {
  if (bytes.size() < kHeaderBytes || std::string_view(bytes).substr(0, magic.size()) != magic)
    fail(ArchiveErrorCode::kSchema, fmt::format("not a sapteve {} file", what));
  const std::uint64_t mlen = get_u64(bytes.data() + magic.size());
  if (mlen > bytes.size() - kHeaderBytes)
    fail(ArchiveErrorCode::kChecksum, fmt::format("{} is truncated inside the manifest", what));
  Container c;
  try {
    c.manifest = json::parse(bytes.substr(kHeaderBytes, mlen));
  } catch (const json::exception& e) {
    fail(ArchiveErrorCode::kSchema, fmt::format("{} manifest is not valid JSON: {}", what, e.what()));
  }
  if (!c.manifest.is_object()) fail(ArchiveErrorCode::kSchema, fmt::format("{} manifest is not an object", what));
  const int version = field<int>(c.manifest, "schema_version", "manifest");
  if (version != kArchiveSchemaVersion)
    fail(ArchiveErrorCode::kSchema,
         fmt::format("unsupported schema_version {} (expected {})", version, kArchiveSchemaVersion));
  const json& pj = c.manifest.contains("payload") ? c.manifest["payload"] : json();
  const auto declared = field<std::uint64_t>(pj, "bytes", "payload");
  const auto crc = field<std::uint32_t>(pj, "crc32", "payload");
  const std::string payload = bytes.substr(kHeaderBytes + mlen);
  if (payload.size() != declared)
    fail(ArchiveErrorCode::kChecksum,
         fmt::format("payload holds {} bytes but the manifest declares {}", payload.size(), declared));
  if (crc32(payload) != crc) fail(ArchiveErrorCode::kChecksum, "payload checksum mismatch");

  if (!c.manifest.contains("arrays") || !c.manifest["arrays"].is_object())
    fail(ArchiveErrorCode::kSchema, "manifest lacks the array table");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> spans;
  for (const auto& [name, entry] : c.manifest["arrays"].items()) {
    if (field<std::string>(entry, "dtype", name.c_str()) != "float64")
      fail(ArchiveErrorCode::kSchema, fmt::format("array '{}' is not float64", name));
    ArchiveArray a;
    a.shape = field<std::vector<std::size_t>>(entry, "shape", name.c_str());
    const auto offset = field<std::uint64_t>(entry, "offset", name.c_str());
    const std::uint64_t nbytes = 8 * static_cast<std::uint64_t>(a.element_count());
    if (offset % 8 != 0 || offset > payload.size() || nbytes > payload.size() - offset)
      fail(ArchiveErrorCode::kShape, fmt::format("array '{}' lies outside the payload", name));
    spans.emplace_back(offset, nbytes);
    a.data.resize(a.element_count());
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] = get_f64(payload.data() + offset + 8 * i);
    c.arrays.emplace(name, std::move(a));
  }
  std::sort(spans.begin(), spans.end());
  std::uint64_t covered = 0;
  for (const auto& [off, n] : spans) {
    if (off != covered) fail(ArchiveErrorCode::kShape, "array payload regions overlap or leave gaps");
    covered += n;
  }
  if (covered != payload.size())
    fail(ArchiveErrorCode::kShape, "total array size does not match the payload length");
  return c;
}

ArchiveArray from_matrix(const Matrix& m) {
  ArchiveArray a;
  a.shape = {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())};
  a.data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a.data.push_back(m(i, j));
  return a;
}

ArchiveArray from_vector(const Vector& v) {
  ArchiveArray a;
  a.shape = {static_cast<std::size_t>(v.size())};
  a.data.assign(v.data(), v.data() + v.size());
  return a;
}

ArchiveArray from_tensor(const Tensor4& t) {
  ArchiveArray a;
  for (int d : t.dims()) a.shape.push_back(static_cast<std::size_t>(d));
  a.data = t.values();
  return a;
}

Matrix to_matrix(const ArchiveArray& a, const std::string& name) {
  if (a.shape.size() != 2) fail(ArchiveErrorCode::kShape, fmt::format("array '{}' is not rank 2", name));
  Matrix m(static_cast<Eigen::Index>(a.shape[0]), static_cast<Eigen::Index>(a.shape[1]));
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = a.data[k++];
  return m;
}

Vector to_vector(const ArchiveArray& a, const std::string& name) {
  if (a.shape.size() != 1) fail(ArchiveErrorCode::kShape, fmt::format("array '{}' is not rank 1", name));
  return Eigen::Map<const Vector>(a.data.data(), static_cast<Eigen::Index>(a.data.size()));
}

Tensor4 to_tensor(const ArchiveArray& a, const std::string& name) {
  if (a.shape.size() != 4) fail(ArchiveErrorCode::kShape, fmt::format("array '{}' is not rank 4", name));
  Tensor4 t(static_cast<int>(a.shape[0]), static_cast<int>(a.shape[1]), static_cast<int>(a.shape[2]),
            static_cast<int>(a.shape[3]));
  t.values() = a.data;
  return t;
}

using Shape = std::vector<std::size_t>;

std::optional<Shape> expected_shape(const std::string& name, std::size_t na, std::size_t nb) {
  if (name == "v") return Shape{na, na, nb, nb};
  if (name == "S") return Shape{na, nb};
  if (name == "h1_A") return Shape{na, na};
  if (name == "h1_B") return Shape{nb, nb};
  if (name == "eri_A") return Shape{na, na, na, na};
  if (name == "eri_B") return Shape{nb, nb, nb, nb};
  if (name == "v_abba") return Shape{na, nb, nb, na};
  if (name == "v_aaba") return Shape{na, na, nb, na};
  if (name == "v_abbb") return Shape{na, nb, nb, nb};
  if (name == "gap_A" || name == "gap_B" || name == "overlap_A" || name == "overlap_B") return Shape{};
  return std::nullopt;  // core lists: rank 1 of any length
}

std::string shape_string(const Shape& s) {
  return fmt::format("[{}]", fmt::join(s, ", "));
}

double symmetry_scale(const Tensor4& t) {
  double m = 0.0;
  for (double x : t.values()) m = std::max(m, std::abs(x));
  return std::max(1.0, m);
}

/** @brief Projects eight-fold chemist symmetry, rejecting larger deviations. */
Tensor4 project_eri(const Tensor4& eri, const std::string& name, double tol) {
  const int n = eri.dim(0);
  Tensor4 out(n, n, n, n);
  double worst = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double a = 0.5 * (eri(p, q, r, s) + eri(q, p, r, s));
          const double b = 0.5 * (eri(p, q, s, r) + eri(q, p, s, r));
          const double c = 0.5 * (eri(r, s, p, q) + eri(s, r, p, q));
          const double d = 0.5 * (eri(r, s, q, p) + eri(s, r, q, p));
          const double avg = 0.5 * (0.5 * (a + b) + 0.5 * (c + d));
          worst = std::max(worst, std::abs(eri(p, q, r, s) - avg));
          out(p, q, r, s) = avg;
        }
  if (worst > tol * symmetry_scale(eri))
    fail(ArchiveErrorCode::kSymmetry,
         fmt::format("{}: eight-fold symmetry violated by {:.3e}", name, worst));
  return out;
}

Matrix project_symmetric(const Matrix& m, const std::string& name, double tol) {
  const Matrix sym = 0.5 * (m + m.transpose());
  const double worst = (m - sym).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (worst > tol * scale)
    fail(ArchiveErrorCode::kSymmetry, fmt::format("{}: matrix is not symmetric ({:.3e})", name, worst));
  return sym;
}

std::string observable_name(Observable o) { return to_string(o); }

}  // namespace

std::size_t ArchiveArray::element_count() const {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::uint32_t crc32(const std::string& bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

const std::vector<std::string>& archive_array_names() {
  static const std::vector<std::string> names = {
      "v",     "S",     "h1_A",  "h1_B",  "eri_A", "eri_B",
      "partition_A_core", "partition_B_core", "gap_A", "gap_B", "overlap_A", "overlap_B",
      "v_abba", "v_aaba", "v_abbb"};
  return names;
}

// ------------------------------------------------------------ TensorArchive

TensorArchive TensorArchive::from_dimer(const DimerTensors& t) {
  t.validate();
  TensorArchive a(t.basis);
  a.set_tensor("v", t.v);
  a.set_matrix("S", t.S);
  if (t.v_abba) a.set_tensor("v_abba", *t.v_abba);
  if (t.v_aaba) a.set_tensor("v_aaba", *t.v_aaba);
  if (t.v_abbb) a.set_tensor("v_abbb", *t.v_abbb);
  return a;
}

const ArchiveArray& TensorArchive::array(const std::string& name) const {
  auto it = arrays_.find(name);
  if (it == arrays_.end()) fail(ArchiveErrorCode::kSchema, fmt::format("archive lacks array '{}'", name));
  return it->second;
}

void TensorArchive::set(const std::string& name, ArchiveArray a) {
  const auto& names = archive_array_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    fail(ArchiveErrorCode::kSchema, fmt::format("unrecognized array name '{}'", name));
  if (a.data.size() != a.element_count())
    fail(ArchiveErrorCode::kShape, fmt::format("array '{}' data does not match its shape", name));
  arrays_[name] = std::move(a);
}

void TensorArchive::set_scalar(const std::string& name, double x) { set(name, {{}, {x}}); }
void TensorArchive::set_matrix(const std::string& name, const Matrix& m) { set(name, from_matrix(m)); }
void TensorArchive::set_tensor(const std::string& name, const Tensor4& t) { set(name, from_tensor(t)); }

void TensorArchive::set_indices(const std::string& name, const std::vector<int>& idx) {
  ArchiveArray a;
  a.shape = {idx.size()};
  for (int i : idx) a.data.push_back(static_cast<double>(i));
  set(name, std::move(a));
}

double TensorArchive::scalar(const std::string& name) const {
  const ArchiveArray& a = array(name);
  if (!a.shape.empty()) fail(ArchiveErrorCode::kShape, fmt::format("array '{}' is not a scalar", name));
  return a.data.at(0);
}

Matrix TensorArchive::matrix(const std::string& name) const { return to_matrix(array(name), name); }
Tensor4 TensorArchive::tensor(const std::string& name) const { return to_tensor(array(name), name); }

std::vector<int> TensorArchive::indices(const std::string& name) const {
  const ArchiveArray& a = array(name);
  if (a.shape.size() != 1) fail(ArchiveErrorCode::kShape, fmt::format("array '{}' is not rank 1", name));
  const int limit = name == "partition_A_core" ? basis_.n_orb_A : basis_.n_orb_B;
  std::vector<int> out;
  for (double d : a.data) {
    if (d != std::floor(d) || d < 0 || d >= limit)
      fail(ArchiveErrorCode::kShape, fmt::format("array '{}' holds an invalid orbital index {}", name, d));
    out.push_back(static_cast<int>(d));
  }
  return out;
}

void TensorArchive::validate() const {
  if (basis_.n_orb_A < 0 || basis_.n_orb_B < 0)
    fail(ArchiveErrorCode::kShape, "orbital counts must be nonnegative");
  const auto na = static_cast<std::size_t>(basis_.n_orb_A);
  const auto nb = static_cast<std::size_t>(basis_.n_orb_B);
  const auto& names = archive_array_names();
  for (const auto& [name, a] : arrays_) {
    if (std::find(names.begin(), names.end(), name) == names.end())
      fail(ArchiveErrorCode::kSchema, fmt::format("unrecognized array name '{}'", name));
    if (a.data.size() != a.element_count())
      fail(ArchiveErrorCode::kShape, fmt::format("array '{}' data does not match its shape", name));
    if (auto want = expected_shape(name, na, nb)) {
      if (a.shape != *want)
        fail(ArchiveErrorCode::kShape,
             fmt::format("array '{}' has shape {} but N_A = {}, N_B = {} requires {}", name,
                         shape_string(a.shape), na, nb, shape_string(*want)));
    } else {
      indices(name);
    }
  }
}

DimerTensors TensorArchive::dimer() const {
  DimerTensors t;
  t.basis = basis_;
  t.v = tensor("v");
  t.S = matrix("S");
  if (has("v_abba")) t.v_abba = tensor("v_abba");
  if (has("v_aaba")) t.v_aaba = tensor("v_aaba");
  if (has("v_abbb")) t.v_abbb = tensor("v_abbb");
  try {
    project_input_symmetries(t);
  } catch (const ContractViolation& e) {
    fail(ArchiveErrorCode::kSymmetry, e.what());
  } catch (const DimensionError& e) {
    fail(ArchiveErrorCode::kShape, e.what());
  }
  return t;
}

bool TensorArchive::has_partition() const {
  for (const char* name : {"partition_A_core", "partition_B_core"})
    if (has(name) && !array(name).data.empty()) return true;
  return false;
}

SpacePartition TensorArchive::partition() const {
  SpacePartition p;
  if (has("partition_A_core")) p.core_A = indices("partition_A_core");
  if (has("partition_B_core")) p.core_B = indices("partition_B_core");
  for (int i = 0; i < basis_.n_orb_A; ++i)
    if (std::find(p.core_A.begin(), p.core_A.end(), i) == p.core_A.end()) p.active_A.push_back(i);
  for (int i = 0; i < basis_.n_orb_B; ++i)
    if (std::find(p.core_B.begin(), p.core_B.end(), i) == p.core_B.end()) p.active_B.push_back(i);
  return p;
}

bool TensorArchive::has_monomer_hamiltonian(char monomer) const {
  const std::string x(1, monomer);
  return has("h1_" + x) && has("eri_" + x);
}

std::pair<Matrix, Tensor4> TensorArchive::monomer_hamiltonian(char monomer) const {
  if (monomer != 'A' && monomer != 'B')
    throw std::invalid_argument(fmt::format("monomer must be 'A' or 'B', got '{}'", monomer));
  const std::string x(1, monomer);
  return {project_symmetric(matrix("h1_" + x), "h1_" + x, 1e-10),
          project_eri(tensor("eri_" + x), "eri_" + x, 1e-10)};
}

std::string serialize_archive(const TensorArchive& a) {
  a.validate();
  json m;
  m["schema_version"] = kArchiveSchemaVersion;
  m["dimer"] = {{"N_A", a.basis().n_orb_A},
                {"N_B", a.basis().n_orb_B},
                {"eta_A", a.basis().n_elec_A},
                {"eta_B", a.basis().n_elec_B},
                {"units", a.units()}};
  return write_container(kArchiveMagic, std::move(m), a.arrays());
}

TensorArchive parse_archive(const std::string& bytes) {
  Container c = read_container(bytes, kArchiveMagic, "archive");
  const json& d = c.manifest.contains("dimer") ? c.manifest["dimer"] : json();
  DimerBasis basis;
  basis.n_orb_A = field<int>(d, "N_A", "dimer");
  basis.n_orb_B = field<int>(d, "N_B", "dimer");
  basis.n_elec_A = field<int>(d, "eta_A", "dimer");
  basis.n_elec_B = field<int>(d, "eta_B", "dimer");
  if (field<std::string>(d, "units", "dimer") != "hartree")
    fail(ArchiveErrorCode::kSchema, "archive units must be 'hartree'");
  TensorArchive a(basis);
  for (auto& [name, arr] : c.arrays) {
    const auto& names = archive_array_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
      fail(ArchiveErrorCode::kSchema, fmt::format("unrecognized array name '{}'", name));
    a.set(name, std::move(arr));
  }
  a.validate();
  // Symmetry is checked here so that violations surface at load time. The
  // stored arrays stay bit-identical to the file; accessors return the
  // projected tensors.
  if (a.has_dimer()) a.dimer();
  for (char x : {'A', 'B'})
    if (a.has_monomer_hamiltonian(x)) a.monomer_hamiltonian(x);
  return a;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ArchiveErrorCode::kIo, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ArchiveErrorCode::kIo, fmt::format("cannot read '{}'", path.string()));
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ArchiveErrorCode::kIo, fmt::format("cannot create '{}'", path.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ArchiveErrorCode::kIo, fmt::format("cannot write '{}'", path.string()));
}

void save_archive(const TensorArchive& a, const std::filesystem::path& path) {
  write_file(path, serialize_archive(a));
}

TensorArchive load_archive(const std::filesystem::path& path) { return parse_archive(read_file(path)); }

// ------------------------------------------------------------------ FCIDUMP

FcidumpData parse_fcidump(const std::string& text) {
  std::string upper = text;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  const auto start = upper.find("&FCI");
  if (start == std::string::npos) fail(ArchiveErrorCode::kSchema, "FCIDUMP lacks the &FCI header");
  std::size_t end = upper.find("&END", start);
  std::size_t body = end == std::string::npos ? std::string::npos : end + 4;
  if (end == std::string::npos) {
    end = upper.find('/', start);
    body = end == std::string::npos ? std::string::npos : end + 1;
  }
  if (end == std::string::npos) fail(ArchiveErrorCode::kSchema, "FCIDUMP header is not terminated");
  const std::string header = upper.substr(start, end - start);
  auto key = [&](const char* name, bool required) -> int {
    const std::regex re(std::string("\\b") + name + "\\s*=\\s*(-?\\d+)");
    std::smatch m;
    if (!std::regex_search(header, m, re)) {
      if (required) fail(ArchiveErrorCode::kSchema, fmt::format("FCIDUMP header lacks {}", name));
      return 0;
    }
    return std::stoi(m[1].str());
  };
  FcidumpData d;
  d.n_orb = key("NORB", true);
  d.n_elec = key("NELEC", true);
  d.ms2 = key("MS2", false);
  if (d.n_orb < 1) fail(ArchiveErrorCode::kSchema, "FCIDUMP NORB must be positive");
  const int n = d.n_orb;
  d.h1 = Matrix::Zero(n, n);
  d.eri = Tensor4(n, n, n, n);
  std::istringstream lines(upper.substr(body));
  std::string line;
  while (std::getline(lines, line)) {
    std::replace(line.begin(), line.end(), 'D', 'E');
    std::istringstream ls(line);
    double value = 0.0;
    int i = 0, j = 0, k = 0, l = 0;
    if (!(ls >> value)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      fail(ArchiveErrorCode::kSchema, fmt::format("malformed FCIDUMP line '{}'", line));
    }
    if (!(ls >> i >> j >> k >> l)) fail(ArchiveErrorCode::kSchema, fmt::format("malformed FCIDUMP line '{}'", line));
    for (int x : {i, j, k, l})
      if (x < 0 || x > n) fail(ArchiveErrorCode::kShape, fmt::format("FCIDUMP index {} exceeds NORB {}", x, n));
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      d.core_energy = value;
    } else if (k == 0 && l == 0) {
      if (j == 0) continue;  // orbital energy
      d.h1(i - 1, j - 1) = value;
      d.h1(j - 1, i - 1) = value;
    } else {
      if (i == 0 || j == 0 || k == 0 || l == 0)
        fail(ArchiveErrorCode::kSchema, fmt::format("malformed FCIDUMP line '{}'", line));
      const int p = i - 1, q = j - 1, r = k - 1, s = l - 1;
      for (auto [a, b, c, e] : {std::array{p, q, r, s}, std::array{q, p, r, s}, std::array{p, q, s, r},
                                std::array{q, p, s, r}, std::array{r, s, p, q}, std::array{s, r, p, q},
                                std::array{r, s, q, p}, std::array{s, r, q, p}})
        d.eri(a, b, c, e) = value;
    }
  }
  return d;
}

FcidumpData read_fcidump(const std::filesystem::path& path) { return parse_fcidump(read_file(path)); }

void insert_monomer(TensorArchive& a, char monomer, const FcidumpData& d) {
  if (monomer != 'A' && monomer != 'B')
    throw std::invalid_argument(fmt::format("monomer must be 'A' or 'B', got '{}'", monomer));
  int& n = monomer == 'A' ? a.basis().n_orb_A : a.basis().n_orb_B;
  int& e = monomer == 'A' ? a.basis().n_elec_A : a.basis().n_elec_B;
  if (n != 0 && n != d.n_orb)
    fail(ArchiveErrorCode::kShape,
         fmt::format("FCIDUMP has {} orbitals but the archive records N_{} = {}", d.n_orb, monomer, n));
  n = d.n_orb;
  e = d.n_elec;
  const std::string x(1, monomer);
  a.set_matrix("h1_" + x, d.h1);
  a.set_tensor("eri_" + x, d.eri);
}

// ------------------------------------------------------------ factor cache

std::string serialize_factorized(const FactorizedOperator& f) {
  std::map<std::string, ArchiveArray> arrays;
  json m;
  m["schema_version"] = kArchiveSchemaVersion;
  m["observable"] = observable_name(f.observable);
  m["space"] = to_string(f.space);
  m["constant"] = f.constant;
  m["truncation_threshold"] = f.truncation_threshold;
  auto put_spectral = [&](const std::string& name, const SpectralDecomposition& s) {
    arrays[name + ".values"] = from_vector(s.values);
    arrays[name + ".vectors"] = from_matrix(s.vectors);
  };
  put_spectral("one_body_A", f.one_body_A);
  put_spectral("one_body_B", f.one_body_B);
  if (f.product_one_body_A) put_spectral("product_one_body_A", *f.product_one_body_A);
  if (f.product_one_body_B) put_spectral("product_one_body_B", *f.product_one_body_B);
  m["product_one_body"] = f.product_one_body_A.has_value();
  m["overlap"] = f.overlap.has_value();
  if (f.overlap) {
    arrays["overlap.s"] = from_vector(f.overlap->s);
    arrays["overlap.U"] = from_matrix(f.overlap->U);
    arrays["overlap.V"] = from_matrix(f.overlap->V);
  }
  json blocks = json::array();
  for (const auto& [label, b] : f.blocks) {
    json bj;
    bj["label"] = label;
    bj["dims"] = b.dims;
    bj["perm"] = b.layout.perm;
    bj["outer_symmetric"] = b.layout.outer_symmetric;
    bj["left_symmetric"] = b.layout.left_symmetric;
    bj["right_symmetric"] = b.layout.right_symmetric;
    bj["discarded_weight"] = b.discarded_weight;
    json terms = json::array();
    for (std::size_t t = 0; t < b.terms.size(); ++t) {
      const FactorTerm& term = b.terms[t];
      terms.push_back({{"s", term.s},
                       {"left_symmetric", term.left.symmetric},
                       {"right_symmetric", term.right.symmetric}});
      for (const auto& [side, inner] : {std::pair{"left", &term.left}, std::pair{"right", &term.right}}) {
        const std::string base = fmt::format("block.{}.{}.{}", label, t, side);
        arrays[base + ".weights"] = from_vector(inner->weights);
        arrays[base + ".U"] = from_matrix(inner->U);
        arrays[base + ".V"] = from_matrix(inner->V);
      }
    }
    bj["terms"] = std::move(terms);
    blocks.push_back(std::move(bj));
  }
  m["blocks"] = std::move(blocks);
  return write_container(kFactorMagic, std::move(m), arrays);
}

FactorizedOperator parse_factorized(const std::string& bytes) {
  Container c = read_container(bytes, kFactorMagic, "factor cache");
  auto arr = [&](const std::string& name) -> const ArchiveArray& {
    auto it = c.arrays.find(name);
    if (it == c.arrays.end()) fail(ArchiveErrorCode::kSchema, fmt::format("factor cache lacks '{}'", name));
    return it->second;
  };
  auto spectral = [&](const std::string& name) {
    SpectralDecomposition s;
    s.values = to_vector(arr(name + ".values"), name);
    s.vectors = to_matrix(arr(name + ".vectors"), name);
    return s;
  };
  const json& m = c.manifest;
  FactorizedOperator f;
  try {
    f.observable = parse_observable(field<std::string>(m, "observable", "factor cache"));
  } catch (const std::invalid_argument& e) {
    fail(ArchiveErrorCode::kSchema, e.what());
  }
  const auto space = field<std::string>(m, "space", "factor cache");
  if (space != "full" && space != "active") fail(ArchiveErrorCode::kSchema, "unknown space tag '" + space + "'");
  f.space = space == "full" ? SpaceTag::kFull : SpaceTag::kActive;
  f.constant = field<double>(m, "constant", "factor cache");
  f.truncation_threshold = field<double>(m, "truncation_threshold", "factor cache");
  f.one_body_A = spectral("one_body_A");
  f.one_body_B = spectral("one_body_B");
  if (field<bool>(m, "product_one_body", "factor cache")) {
    f.product_one_body_A = spectral("product_one_body_A");
    f.product_one_body_B = spectral("product_one_body_B");
  }
  if (field<bool>(m, "overlap", "factor cache")) {
    OverlapSvd o;
    o.s = to_vector(arr("overlap.s"), "overlap.s");
    o.U = to_matrix(arr("overlap.U"), "overlap.U");
    o.V = to_matrix(arr("overlap.V"), "overlap.V");
    f.overlap = o;
  }
  if (!m.contains("blocks") || !m["blocks"].is_array()) fail(ArchiveErrorCode::kSchema, "factor cache lacks blocks");
  for (const auto& bj : m["blocks"]) {
    BlockFactorization b;
    b.label = field<std::string>(bj, "label", "block");
    b.dims = field<Tensor4::Dims>(bj, "dims", "block");
    b.layout.perm = field<std::array<int, 4>>(bj, "perm", "block");
    b.layout.outer_symmetric = field<bool>(bj, "outer_symmetric", "block");
    b.layout.left_symmetric = field<bool>(bj, "left_symmetric", "block");
    b.layout.right_symmetric = field<bool>(bj, "right_symmetric", "block");
    b.discarded_weight = field<double>(bj, "discarded_weight", "block");
    if (!bj.contains("terms") || !bj["terms"].is_array()) fail(ArchiveErrorCode::kSchema, "block lacks terms");
    std::size_t t = 0;
    for (const auto& tj : bj["terms"]) {
      FactorTerm term;
      term.s = field<double>(tj, "s", "term");
      term.left.symmetric = field<bool>(tj, "left_symmetric", "term");
      term.right.symmetric = field<bool>(tj, "right_symmetric", "term");
      for (const auto& [side, inner] : {std::pair{"left", &term.left}, std::pair{"right", &term.right}}) {
        const std::string base = fmt::format("block.{}.{}.{}", b.label, t, side);
        inner->weights = to_vector(arr(base + ".weights"), base);
        inner->U = to_matrix(arr(base + ".U"), base);
        inner->V = to_matrix(arr(base + ".V"), base);
      }
      b.terms.push_back(std::move(term));
      ++t;
    }
    f.blocks.emplace(b.label, std::move(b));
  }
  return f;
}

void save_factorized(const FactorizedOperator& f, const std::filesystem::path& path) {
  write_file(path, serialize_factorized(f));
}

FactorizedOperator load_factorized(const std::filesystem::path& path) {
  return parse_factorized(read_file(path));
}

// -------------------------------------------------------------- run config

void RunConfig::validate() const {
  if (!(eps_targ > 0.0) || !std::isfinite(eps_targ))
    throw std::invalid_argument(fmt::format("eps_targ must be positive, got {}", eps_targ));
  if (!(truncation_threshold >= 0.0) || truncation_threshold >= 1.0)
    throw std::invalid_argument(
        fmt::format("truncation_threshold must lie in [0, 1), got {}", truncation_threshold));
  if (observables.empty()) throw std::invalid_argument("no observable selected");
  calibration_constants();
}

CalibrationConstants RunConfig::calibration_constants() const {
  try {
    return CalibrationConstants::from_map(calibration);
  } catch (const CostModelError& e) {
    throw std::invalid_argument(e.what());
  }
}

RunConfig parse_run_config(const std::string& json_text) {
  RunConfig c;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw std::invalid_argument("run configuration must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "eps_targ") {
        c.eps_targ = value.get<double>();
      } else if (key == "truncation_threshold") {
        c.truncation_threshold = value.get<double>();
      } else if (key == "calibration") {
        c.calibration = value.get<std::map<std::string, double>>();
      } else if (key == "observables") {
        c.observables.clear();
        for (const auto& o : value) c.observables.push_back(parse_observable(o.get<std::string>()));
      } else if (key == "output_dir") {
        c.output_dir = value.get<std::string>();
      } else {
        throw std::invalid_argument(fmt::format("unknown run configuration key '{}'", key));
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(fmt::format("malformed run configuration: {}", e.what()));
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(read_file(path)); }

// ----------------------------------------------------------------- reports

namespace {

const std::vector<std::string>& norm_columns() {
  static const std::vector<std::string> cols = {
      kNormOneBodyA, kNormOneBodyB, kNormTwoBody, kNormExchange, kNormVPA,  kNormVPB,
      kNormVP1m,     kNormVP1l,     kNormVP2,     kNormVP3,      kNormVP4,  kNormVP1k};
  return cols;
}

}  // namespace

std::string norms_json(const std::vector<NormReport>& reports) {
  json out = json::array();
  for (const auto& r : reports) {
    json comps = json::object();
    for (const auto& col : norm_columns())
      if (r.components.count(col)) comps[col] = r.components.at(col);
    for (const auto& [k, v] : r.components)
      if (!comps.contains(k)) comps[k] = v;
    out.push_back({{"observable", observable_name(r.observable)},
                   {"representation", to_string(r.representation)},
                   {"total", r.total},
                   {"total_without_three_pair", r.total_without_three_pair()},
                   {"lambda_s", r.lambda_s},
                   {"components", std::move(comps)}});
  }
  return out.dump(2) + "\n";
}

std::string norms_tsv(const std::vector<NormReport>& reports) {
  std::ostringstream os;
  os << "observable\trepresentation\ttotal\ttotal_without_three_pair\tlambda_s";
  for (const auto& col : norm_columns()) os << '\t' << col;
  os << '\n';
  for (const auto& r : reports) {
    os << observable_name(r.observable) << '\t' << to_string(r.representation) << '\t'
       << fmt::format("{:.10g}\t{:.10g}\t{:.10g}", r.total, r.total_without_three_pair(), r.lambda_s);
    for (const auto& col : norm_columns()) {
      auto it = r.components.find(col);
      os << '\t' << (it == r.components.end() ? std::string("-") : fmt::format("{:.10g}", it->second));
    }
    os << '\n';
  }
  return os.str();
}

std::string budget_json(const ErrorBudget& b) {
  json j = {{"eps_targ", b.eps_targ},   {"eps_V", b.eps_V},         {"eps_VP", b.eps_VP},
            {"eps_P", b.eps_P},         {"weight_V", b.weight_V},   {"weight_VP", b.weight_VP},
            {"weight_P", b.weight_P},   {"constraint", b.constraint_value()}};
  return j.dump(2) + "\n";
}

}  // namespace sapteve
