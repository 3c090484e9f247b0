#include "einselect/io.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <iomanip>
#include <sstream>

namespace einselect {
namespace io {

namespace {

std::string fmt17(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

}  // namespace

json to_json(const PureState& psi) {
  json amps = json::array();
  for (long i = 0; i < psi.dim(); ++i)
    amps.push_back({psi.amplitudes(i).real(), psi.amplitudes(i).imag()});
  json j{{"dims", psi.dims}, {"amplitudes", std::move(amps)}};
  if (!psi.labels.empty()) j["labels"] = psi.labels;
  return j;
}

json to_json(const DensityMatrix& rho) {
  json rows = json::array();
  for (long i = 0; i < rho.dim(); ++i) {
    json row = json::array();
    for (long k = 0; k < rho.dim(); ++k)
      row.push_back({rho.matrix(i, k).real(), rho.matrix(i, k).imag()});
    rows.push_back(std::move(row));
  }
  json j{{"dims", rho.dims}, {"matrix", std::move(rows)}};
  if (!rho.labels.empty()) j["labels"] = rho.labels;
  return j;
}

PureState pure_state_from_json(const json& j) {
  const auto dims = j.at("dims").get<std::vector<int>>();
  const auto& amps = j.at("amplitudes");
  Vec v(amps.size());
  for (size_t i = 0; i < amps.size(); ++i)
    v(i) = cxd(amps[i][0].get<double>(), amps[i][1].get<double>());
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return PureState(std::move(v), dims, std::move(labels));
}

DensityMatrix density_matrix_from_json(const json& j) {
  const auto dims = j.at("dims").get<std::vector<int>>();
  const auto& rows = j.at("matrix");
  Mat m(rows.size(), rows.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t k = 0; k < rows.size(); ++k)
      m(i, k) = cxd(rows[i][k][0].get<double>(), rows[i][k][1].get<double>());
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return DensityMatrix(std::move(m), dims, std::move(labels));
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& columns)
    : out_(path), n_cols_(columns.size()) {
  if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path.string());
  for (size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_cols_)
    throw std::invalid_argument("CsvWriter: column count mismatch");
  for (size_t i = 0; i < values.size(); ++i)
    out_ << fmt17(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
  if (values.size() != n_cols_)
    throw std::invalid_argument("CsvWriter: column count mismatch");
  for (size_t i = 0; i < values.size(); ++i)
    out_ << values[i] << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::close() { out_.close(); }

void write_snapshot(const std::filesystem::path& path, const json& header,
                    const double* data, size_t count) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_snapshot: cannot open " + path.string());
  out << header.dump() << '\n';
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(count * sizeof(double)));
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_snapshot: cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  Snapshot s;
  s.header = json::parse(line);
  const auto pos = in.tellg();
  in.seekg(0, std::ios::end);
  const size_t bytes = static_cast<size_t>(in.tellg() - pos);
  in.seekg(pos);
  s.data.resize(bytes / sizeof(double));
  in.read(reinterpret_cast<char*>(s.data.data()),
          static_cast<std::streamsize>(bytes));
  return s;
}

namespace {

// diverging palette: blue (negative) - white (zero) - red (positive)
void palette(double v, unsigned char* rgb) {
  v = std::clamp(v, -1.0, 1.0);
  if (v >= 0) {
    rgb[0] = 255;
    rgb[1] = static_cast<unsigned char>(255 * (1.0 - v));
    rgb[2] = static_cast<unsigned char>(255 * (1.0 - v));
  } else {
    rgb[0] = static_cast<unsigned char>(255 * (1.0 + v));
    rgb[1] = static_cast<unsigned char>(255 * (1.0 + v));
    rgb[2] = 255;
  }
}

void push_u32(std::vector<unsigned char>& v, uint32_t x) {
  v.push_back(static_cast<unsigned char>(x >> 24));
  v.push_back(static_cast<unsigned char>(x >> 16));
  v.push_back(static_cast<unsigned char>(x >> 8));
  v.push_back(static_cast<unsigned char>(x));
}

void png_chunk(std::vector<unsigned char>& out, const char type[4],
               const std::vector<unsigned char>& payload) {
  push_u32(out, static_cast<uint32_t>(payload.size()));
  std::vector<unsigned char> body(type, type + 4);
  body.insert(body.end(), payload.begin(), payload.end());
  out.insert(out.end(), body.begin(), body.end());
  push_u32(out, static_cast<uint32_t>(
                    crc32(0L, body.data(), static_cast<uInt>(body.size()))));
}

std::vector<unsigned char> png_encode(int w, int h,
                                      const std::vector<unsigned char>& rgb) {
  std::vector<unsigned char> raw;
  raw.reserve(static_cast<size_t>(h) * (1 + 3 * w));
  for (int y = 0; y < h; ++y) {
    raw.push_back(0);  // filter: none
    raw.insert(raw.end(), rgb.begin() + static_cast<size_t>(y) * 3 * w,
               rgb.begin() + static_cast<size_t>(y + 1) * 3 * w);
  }
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<unsigned char> compressed(bound);
  if (compress2(compressed.data(), &bound, raw.data(),
                static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw std::runtime_error("png_encode: zlib failure");
  compressed.resize(bound);

  std::vector<unsigned char> png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  std::vector<unsigned char> ihdr;
  push_u32(ihdr, static_cast<uint32_t>(w));
  push_u32(ihdr, static_cast<uint32_t>(h));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(2);   // color type: RGB
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  png_chunk(png, "IHDR", ihdr);
  png_chunk(png, "IDAT", compressed);
  png_chunk(png, "IEND", {});
  return png;
}

std::string base64(const std::vector<unsigned char>& data) {
  static const char* tbl =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 3 <= data.size(); i += 3) {
    const uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
    out.push_back(tbl[(v >> 18) & 63]);
    out.push_back(tbl[(v >> 12) & 63]);
    out.push_back(tbl[(v >> 6) & 63]);
    out.push_back(tbl[v & 63]);
  }
  if (i + 1 == data.size()) {
    const uint32_t v = data[i] << 16;
    out.push_back(tbl[(v >> 18) & 63]);
    out.push_back(tbl[(v >> 12) & 63]);
    out += "==";
  } else if (i + 2 == data.size()) {
    const uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
    out.push_back(tbl[(v >> 18) & 63]);
    out.push_back(tbl[(v >> 12) & 63]);
    out.push_back(tbl[(v >> 6) & 63]);
    out += "=";
  }
  return out;
}

}  // namespace

void svg_heatmap(const std::filesystem::path& path, const RMat& values,
                 const std::string& title, double x0, double dx, double y0,
                 double dy) {
  const int nx = static_cast<int>(values.rows());
  const int ny = static_cast<int>(values.cols());
  const double vmax = std::max(values.cwiseAbs().maxCoeff(), 1e-300);
  const int width = 640, height = 640, margin = 40;

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height + 20 << "' viewBox='0 0 " << width << " "
      << height + 20 << "'>\n";
  svg << "<text x='" << width / 2 << "' y='16' text-anchor='middle' "
      << "font-family='sans-serif' font-size='13'>" << title << "</text>\n";

  const double plot_w = width - 2 * margin, plot_h = height - 2 * margin;
  if (static_cast<long>(nx) * ny > 256 * 256) {
    // rasterize into an embedded PNG tile
    std::vector<unsigned char> rgb(static_cast<size_t>(nx) * ny * 3);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        // image row 0 is the top: largest y index first
        palette(values(i, ny - 1 - j) / vmax,
                &rgb[(static_cast<size_t>(j) * nx + i) * 3]);
    const auto png = png_encode(nx, ny, rgb);
    svg << "<image x='" << margin << "' y='" << margin + 20 << "' width='"
        << plot_w << "' height='" << plot_h
        << "' preserveAspectRatio='none' image-rendering='pixelated' "
           "href='data:image/png;base64,"
        << base64(png) << "'/>\n";
  } else {
    const double cw = plot_w / nx, ch = plot_h / ny;
    svg << std::setprecision(4);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        unsigned char rgb[3];
        palette(values(i, j) / vmax, rgb);
        svg << "<rect x='" << margin + i * cw << "' y='"
            << margin + 20 + (ny - 1 - j) * ch << "' width='" << cw * 1.02
            << "' height='" << ch * 1.02 << "' fill='rgb("
            << static_cast<int>(rgb[0]) << "," << static_cast<int>(rgb[1])
            << "," << static_cast<int>(rgb[2]) << ")'/>\n";
      }
  }
  svg << std::setprecision(6);
  svg << "<text x='" << margin << "' y='" << height + 14
      << "' font-family='sans-serif' font-size='11'>x: [" << x0 << ", "
      << x0 + nx * dx << "]  y: [" << y0 << ", " << y0 + ny * dy
      << "]  max |W| = " << vmax << "</text>\n";
  svg << "</svg>\n";
  atomic_write(path, svg.str());
}

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

uint32_t file_crc32(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("file_crc32: cannot open " + path.string());
  uLong crc = crc32(0L, Z_NULL, 0);
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
    crc = crc32(crc, reinterpret_cast<const Bytef*>(buf),
                static_cast<uInt>(in.gcount()));
  return static_cast<uint32_t>(crc);
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace io
}  // namespace einselect
