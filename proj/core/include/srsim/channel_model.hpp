#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "srsim/types.hpp"

namespace srsim {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

double distance(const Vec3& a, const Vec3& b);

// Node positions in meters. Defaults follow the deployment used throughout
// the experiments: transmitter at the origin, surface wall-mounted above the
// receiver.
struct Geometry {
  Vec3 bs{0.0, 0.0, 0.0};
  Vec3 irs{100.0, 0.0, 2.5};
  Vec3 ir{100.0, 0.0, 0.0};
};

// Distance-power law L0 * (d/d0)^(-alpha), one exponent per link.
struct PathLossModel {
  double l0_db = -30.0;  // reference loss at d0
  double d0 = 1.0;       // reference distance, m
  double alpha_g = 2.6;  // transmitter -> surface
  double alpha_r = 2.6;  // surface -> receiver
  double alpha_d = 3.6;  // transmitter -> receiver
};

// Linear average power gain of a link of length d.
double path_loss_linear(double l0_db, double d0, double alpha, double d);

// Small-scale statistics. The two surface links are Rician with a
// deterministic array-response line-of-sight component; the direct link is
// Rayleigh. m_x = 0 picks the panel shape automatically: 5 columns when
// 5 divides M (the deployment's fixed panel width), otherwise the largest
// divisor of M not exceeding sqrt(M).
struct FadingModel {
  double k_g_db = 3.0;  // Rician factor, transmitter -> surface
  double k_r_db = 3.0;  // Rician factor, surface -> receiver
  int m_x = 0;          // panel columns, 0 = auto
};

// Panel factorization (m_x, m_z) with m_x * m_z = m_elems.
std::pair<int, int> ura_shape(int m_elems, int m_x_hint = 0);

// Half-wavelength ULA response along x: [exp(j pi n u)]_{n=0..n_ant-1},
// u = direction cosine of the unit propagation vector against x.
CVec ula_response(int n_ant, double cos_x);

// Half-wavelength URA response on the x-z plane, element index m = ix + mx*iz:
// exp(j pi (ix ux + iz uz)).
CVec ura_response(int mx, int mz, double cos_x, double cos_z);

// Draws one channel realization. Line-of-sight components use the geometry's
// direction cosines; diffuse components are CN(0,1) per entry; every entry is
// scaled so its average power equals the link's path loss. The draw order is
// fixed (h_d, then G column by column with the element index fastest, then
// h_r), so a seed pins the realization bit-for-bit.
ChannelSet sample_channels(const Geometry& geom, const PathLossModel& pl,
                           const FadingModel& fm, int n_ant, int m_elems,
                           std::uint64_t seed);

// Binary channel-dump format for replaying realizations across processes:
// magic "SRCH", u32 version, then per record u64 seed, u32 n, u32 m and the
// little-endian complex arrays h_d (n), G (m x n, row-major), h_r (m).
struct ChannelRecord {
  std::uint64_t seed = 0;
  ChannelSet ch;
};

void write_channel_dump(std::ostream& os, const std::vector<ChannelRecord>& recs);
std::vector<ChannelRecord> read_channel_dump(std::istream& is);
void write_channel_dump_file(const std::string& path,
                             const std::vector<ChannelRecord>& recs);
std::vector<ChannelRecord> read_channel_dump_file(const std::string& path);

}  // namespace srsim
