#pragma once

// CSV artifacts. Reals are printed with 17 significant digits so every value
// round-trips exactly and identical runs produce identical bytes.

#include "physarum/dynamics.hpp"
#include "physarum/error.hpp"
#include "physarum/lyapunov_audit.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace physarum::csv {

inline std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string trajectory_header(Index m, bool with_audit = false) {
  std::string h = "step,time";
  for (Index i = 1; i <= m; ++i) h += ",x_" + std::to_string(i);
  h += ",ctx,residual_inf,V,Vdot,btp,ctq";
  if (with_audit) h += ",Vdot_fd";
  return h;
}

/// `step,time,x_1..x_m,ctx,residual_inf,V,Vdot,btp,ctq`, plus `Vdot_fd` when an
/// audit is supplied.
inline void write_trajectory(std::ostream& out, const Trajectory& traj, const lyapunov::AuditReport* audit = nullptr) {
  const Index m = traj.states.empty() ? 0 : traj.states.front().size();
  out << trajectory_header(m, audit != nullptr) << '\n';
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const Monitor& mon = traj.monitors[k];
    out << traj.steps[k] << ',' << real(traj.times[k]);
    for (Index i = 0; i < m; ++i) out << ',' << real(traj.states[k](i));
    out << ',' << real(mon.ctx) << ',' << real(mon.residual_inf) << ',' << real(mon.V) << ',' << real(mon.Vdot) << ','
        << real(mon.btp) << ',' << real(mon.ctq);
    if (audit != nullptr) out << ',' << real(audit->Vdot_fd[k]);
    out << '\n';
  }
}

inline void write_field(std::ostream& out, const std::vector<FieldSample>& field) {
  out << "x1,x2,dx1,dx2\n";
  for (const auto& s : field) out << real(s.x1) << ',' << real(s.x2) << ',' << real(s.f1) << ',' << real(s.f2) << '\n';
}

/// Writes through a temporary file and renames, so a reader never sees a
/// half-written artifact.
template <class Writer>
void write_file_atomically(const std::filesystem::path& path, Writer&& writer) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::invalid_argument, "cannot write '" + tmp.string() + "'");
    writer(out);
    if (!out) throw Error(ErrorCode::invalid_argument, "write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace physarum::csv
