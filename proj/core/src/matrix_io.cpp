#include "lprec/matrix_io.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "lprec/reports.hpp"

namespace lprec {

namespace {

constexpr char kMagic[4] = {'L', 'P', 'R', 'M'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

void read_bytes(std::istream& in, unsigned char* b, int n) {
  in.read(reinterpret_cast<char*>(b), n);
  if (in.gcount() != n) throw IoError("truncated matrix file");
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  read_bytes(in, b, 4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  read_bytes(in, b, 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

double get_f64(std::istream& in) {
  std::uint64_t bits = get_u64(in);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void write_matrix(const MeasurementMatrix& m, std::ostream& out) {
  const Index M = m.rows(), N = m.cols();
  if (M < 1 || N < 1) throw InvalidArgument("cannot write an empty matrix");
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(M));
  put_u32(out, static_cast<std::uint32_t>(N));
  out.put(static_cast<char>(static_cast<std::uint8_t>(m.ensemble)));
  put_u64(out, m.seed);
  for (Index i = 0; i < M; ++i) {
    for (Index j = 0; j < N; ++j) put_f64(out, m.entries(i, j));
  }
  if (!out) throw IoError("matrix write failed");
}

MeasurementMatrix read_matrix(std::istream& in) {
  unsigned char magic[4];
  read_bytes(in, magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError("not a matrix file (bad magic)");
  }
  const std::uint32_t version = get_u32(in);
  if (version != kVersion) {
    throw IoError("unsupported matrix file version " + std::to_string(version));
  }
  const std::uint32_t M = get_u32(in);
  const std::uint32_t N = get_u32(in);
  if (M < 1 || N < 1) throw IoError("matrix file has empty dimensions");
  unsigned char code;
  read_bytes(in, &code, 1);
  if (code > 2) throw IoError("matrix file has unknown ensemble code");

  MeasurementMatrix m;
  m.ensemble = static_cast<Ensemble>(code);
  m.seed = get_u64(in);
  m.entries.resize(static_cast<Index>(M), static_cast<Index>(N));
  for (std::uint32_t i = 0; i < M; ++i) {
    for (std::uint32_t j = 0; j < N; ++j) {
      m.entries(static_cast<Index>(i), static_cast<Index>(j)) = get_f64(in);
    }
  }
  return m;
}

void save_matrix(const MeasurementMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_matrix(m, out);
}

MeasurementMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return read_matrix(in);
}

void save_matrix_csv(const Matrix& m, const std::string& path) {
  std::string text;
  text.reserve(static_cast<std::size_t>(m.size()) * 12);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) text += ',';
      text += format_double(m(i, j));
    }
    text += '\n';
  }
  write_text_file(path, text);
}

void save_vector_csv(const Vector& v, const std::string& path) {
  std::string text;
  for (Index i = 0; i < v.size(); ++i) {
    text += format_double(v[i]);
    text += '\n';
  }
  write_text_file(path, text);
}

Vector load_vector_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    while (pos < line.size()) {
      std::size_t comma = line.find(',', pos);
      std::string tok = line.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      try {
        vals.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw IoError("bad numeric field '" + tok + "' in " + path);
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (vals.empty()) throw IoError("no numeric data in " + path);
  Vector v(static_cast<Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) {
    v[static_cast<Index>(i)] = vals[i];
  }
  return v;
}

}  // namespace lprec
