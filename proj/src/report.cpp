#include "horoflow/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

namespace horoflow {

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void write_trace_csv(const std::filesystem::path& path, const FlowTrace& trace,
                     const ShiTamResult* lapse) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "t,area,rhat,m_hawking,h_min,h_max,sup_ring_a_sq,sup_one_minus_nudr,"
         "sup_khat_minus_one,r_outer,r_inner,u_min,u_max,w_min,w_max,positivity_margin,dt\n";
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const FlowRecord& r = trace.records[k];
    const FlowDiagnostics& d = r.diag;
    out << format_double(r.t) << ',' << format_double(d.area) << ',' << format_double(d.rhat)
        << ',' << format_double(d.m_hawking) << ',' << format_double(d.h_min) << ','
        << format_double(d.h_max) << ',' << format_double(d.sup_ring_a_sq) << ','
        << format_double(d.sup_one_minus_nudr) << ',' << format_double(d.sup_khat_minus_one)
        << ',' << format_double(d.r_outer) << ',' << format_double(d.r_inner) << ',';
    if (lapse) {
      const LapseState& s = lapse->states[k];
      out << format_double(1.0 + s.z.minCoeff()) << ',' << format_double(1.0 + s.z.maxCoeff())
          << ',' << format_double(s.w.minCoeff()) << ',' << format_double(s.w.maxCoeff()) << ',';
    } else {
      out << ",,,,";
    }
    out << format_double(d.positivity_margin) << ',' << format_double(d.dt) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  write_json(tmp, j);
  std::filesystem::rename(tmp, path);
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

}  // namespace horoflow
