#include "srsim/channel_model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "srsim/rng.hpp"

namespace srsim {

namespace {
constexpr double kPi = 3.14159265358979323846;

struct Dir {
  double cx, cy, cz;  // unit vector components
};

Dir unit_dir(const Vec3& from, const Vec3& to) {
  const double dx = to.x - from.x, dy = to.y - from.y, dz = to.z - from.z;
  const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
  if (d <= 0.0) throw std::invalid_argument("coincident nodes in geometry");
  return {dx / d, dy / d, dz / d};
}
}  // namespace

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double path_loss_linear(double l0_db, double d0, double alpha, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("link distance must be positive");
  return std::pow(10.0, l0_db / 10.0) * std::pow(d / d0, -alpha);
}

std::pair<int, int> ura_shape(int m_elems, int m_x_hint) {
  if (m_elems <= 0) return {0, 0};
  if (m_x_hint > 0) {
    if (m_elems % m_x_hint != 0)
      throw std::invalid_argument("m_x does not divide m_elems");
    return {m_x_hint, m_elems / m_x_hint};
  }
  if (m_elems % 5 == 0) return {5, m_elems / 5};
  int best = 1;
  for (int d = 1; d * d <= m_elems; ++d)
    if (m_elems % d == 0) best = d;
  return {best, m_elems / best};
}

CVec ula_response(int n_ant, double cos_x) {
  CVec a(n_ant);
  for (int n = 0; n < n_ant; ++n)
    a[n] = std::polar(1.0, kPi * n * cos_x);
  return a;
}

CVec ura_response(int mx, int mz, double cos_x, double cos_z) {
  CVec a(mx * mz);
  for (int iz = 0; iz < mz; ++iz)
    for (int ix = 0; ix < mx; ++ix)
      a[ix + mx * iz] = std::polar(1.0, kPi * (ix * cos_x + iz * cos_z));
  return a;
}

ChannelSet sample_channels(const Geometry& geom, const PathLossModel& pl,
                           const FadingModel& fm, int n_ant, int m_elems,
                           std::uint64_t seed) {
  if (n_ant < 1) throw std::invalid_argument("n_ant must be >= 1");
  if (m_elems < 0) throw std::invalid_argument("m_elems must be >= 0");

  const double pl_d = path_loss_linear(pl.l0_db, pl.d0, pl.alpha_d,
                                       distance(geom.bs, geom.ir));
  Rng rng(seed);

  ChannelSet ch;
  ch.h_d = CVec(n_ant);
  const double amp_d = std::sqrt(pl_d);
  for (int n = 0; n < n_ant; ++n) ch.h_d[n] = amp_d * rng.cnormal();

  ch.g_mat = CMat(m_elems, n_ant);
  ch.h_r = CVec(m_elems);
  if (m_elems == 0) return ch;

  const auto [mx, mz] = ura_shape(m_elems, fm.m_x);
  const double pl_g = path_loss_linear(pl.l0_db, pl.d0, pl.alpha_g,
                                       distance(geom.bs, geom.irs));
  const double pl_r = path_loss_linear(pl.l0_db, pl.d0, pl.alpha_r,
                                       distance(geom.irs, geom.ir));

  // LoS of the incoming link: departure cosine at the ULA, arrival cosines at
  // the panel; rank-one outer product of the two responses.
  const Dir bs_to_irs = unit_dir(geom.bs, geom.irs);
  const CVec a_tx = ula_response(n_ant, bs_to_irs.cx);
  const CVec a_rx = ura_response(mx, mz, -bs_to_irs.cx, -bs_to_irs.cz);
  const Dir irs_to_ir = unit_dir(geom.irs, geom.ir);
  const CVec a_out = ura_response(mx, mz, irs_to_ir.cx, irs_to_ir.cz);

  const double k_g = db_to_linear(fm.k_g_db);
  const double k_r = db_to_linear(fm.k_r_db);
  const double g_los = std::sqrt(pl_g * k_g / (k_g + 1.0));
  const double g_nlos = std::sqrt(pl_g / (k_g + 1.0));
  const double r_los = std::sqrt(pl_r * k_r / (k_r + 1.0));
  const double r_nlos = std::sqrt(pl_r / (k_r + 1.0));

  for (int n = 0; n < n_ant; ++n)
    for (int m = 0; m < m_elems; ++m)
      ch.g_mat(m, n) = g_los * a_rx[m] * std::conj(a_tx[n]) + g_nlos * rng.cnormal();
  for (int m = 0; m < m_elems; ++m)
    ch.h_r[m] = r_los * a_out[m] + r_nlos * rng.cnormal();
  return ch;
}

namespace {
constexpr char kMagic[4] = {'S', 'R', 'C', 'H'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}
void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}
void put_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(os, bits);
}
std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}
std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}
double get_f64(std::istream& is) {
  const std::uint64_t bits = get_u64(is);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}
void put_cvec(std::ostream& os, const CVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    put_f64(os, v[i].real());
    put_f64(os, v[i].imag());
  }
}
}  // namespace

void write_channel_dump(std::ostream& os, const std::vector<ChannelRecord>& recs) {
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  put_u32(os, static_cast<std::uint32_t>(recs.size()));
  for (const auto& r : recs) {
    put_u64(os, r.seed);
    put_u32(os, static_cast<std::uint32_t>(r.ch.n_ant()));
    put_u32(os, static_cast<std::uint32_t>(r.ch.m_elems()));
    put_cvec(os, r.ch.h_d);
    for (Eigen::Index m = 0; m < r.ch.g_mat.rows(); ++m)
      for (Eigen::Index n = 0; n < r.ch.g_mat.cols(); ++n) {
        put_f64(os, r.ch.g_mat(m, n).real());
        put_f64(os, r.ch.g_mat(m, n).imag());
      }
    put_cvec(os, r.ch.h_r);
  }
}

std::vector<ChannelRecord> read_channel_dump(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("channel dump: bad magic");
  const std::uint32_t version = get_u32(is);
  if (version != kVersion)
    throw std::runtime_error("channel dump: unsupported version");
  const std::uint32_t count = get_u32(is);
  std::vector<ChannelRecord> recs(count);
  for (auto& r : recs) {
    r.seed = get_u64(is);
    const int n = static_cast<int>(get_u32(is));
    const int m = static_cast<int>(get_u32(is));
    r.ch.h_d = CVec(n);
    for (int i = 0; i < n; ++i) {
      const double re = get_f64(is), im = get_f64(is);
      r.ch.h_d[i] = {re, im};
    }
    r.ch.g_mat = CMat(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        const double re = get_f64(is), im = get_f64(is);
        r.ch.g_mat(i, j) = {re, im};
      }
    r.ch.h_r = CVec(m);
    for (int i = 0; i < m; ++i) {
      const double re = get_f64(is), im = get_f64(is);
      r.ch.h_r[i] = {re, im};
    }
    if (!is) throw std::runtime_error("channel dump: truncated record");
  }
  return recs;
}

void write_channel_dump_file(const std::string& path,
                             const std::vector<ChannelRecord>& recs) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_channel_dump(os, recs);
}

std::vector<ChannelRecord> read_channel_dump_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_channel_dump(is);
}

}  // namespace srsim
