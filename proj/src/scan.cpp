#include "specrange/scan.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace specrange {

void Window::validate() const {
  if (!(re_min < re_max) || !(im_min < im_max))
    throw std::invalid_argument("window extents must be increasing");
  if (nx <= 0 || ny <= 0) throw std::invalid_argument("grid counts must be positive");
}

namespace {

ScanCell classify_cell(const ProblemSpec& spec, const Region& region, Complex w,
                       const ScanOptions& options) {
  ScanCell cell;
  try {
    const LsqResult lsq = eps_omega(spec, region, w);
    cell.eps = lsq.eps;
    cell.status = membership(spec, region, w, options.tau).status;
    // a cell classified inside has an exact solution in the region; the tiny
    // solver residual is noise
    if (cell.status == Status::Inside) cell.eps = 0.0;
    cell.bound = cell.eps > 0.0 ? 1.0 / cell.eps : kInf;
    if (options.skeleton_flag && !region.carved())
      cell.skeleton = boundary_candidate(spec, region, w, options.tau);
  } catch (const DomainError&) {
    cell = ScanCell{};  // pole: undefined, empty eps
  }
  return cell;
}

void atomic_write(const std::string& path, const std::string& bytes, bool binary) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot open output file: " + tmp);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string format_value(double v) {
  if (v == kInf) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ScanField scan_grid(const ProblemSpec& spec, const Region& region, const Window& window,
                    std::vector<double> eps_levels, const ScanOptions& options) {
  window.validate();
  ScanField field;
  field.window = window;
  field.eps_levels = std::move(eps_levels);
  std::sort(field.eps_levels.begin(), field.eps_levels.end());
  field.cells.resize(static_cast<std::size_t>(window.nx) * window.ny);

  const int threads = std::max(options.threads, 1);
  auto worker = [&](int tid) {
    for (int iy = tid; iy < window.ny; iy += threads) {
      for (int ix = 0; ix < window.nx; ++ix) {
        field.cells[static_cast<std::size_t>(iy) * window.nx + ix] =
            classify_cell(spec, region, window.center(ix, iy), options);
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (std::thread& t : pool) t.join();
  }

  for (const ScanCell& cell : field.cells)
    if (cell.status == Status::Undefined) ++field.undefined_cells;
  return field;
}

void write_csv(const ScanField& field, const std::string& path) {
  std::string out = "re,im,status,eps,bound,skeleton\n";
  out.reserve(out.size() + field.cells.size() * 64);
  for (int iy = 0; iy < field.window.ny; ++iy) {
    for (int ix = 0; ix < field.window.nx; ++ix) {
      const ScanCell& cell = field.at(ix, iy);
      const Complex w = field.window.center(ix, iy);
      out += format_value(w.real());
      out += ',';
      out += format_value(w.imag());
      out += ',';
      switch (cell.status) {
        case Status::Inside: out += "in"; break;
        case Status::Outside: out += "out"; break;
        case Status::BoundaryCandidate: out += "boundary"; break;
        case Status::Undefined: out += "undefined"; break;
      }
      out += ',';
      if (cell.status != Status::Undefined) out += format_value(cell.eps);
      out += ',';
      if (cell.status != Status::Undefined) out += format_value(cell.bound);
      out += ',';
      out += cell.skeleton ? '1' : '0';
      out += '\n';
    }
  }
  atomic_write(path, out, false);
}

void write_ppm(const ScanField& field, const std::string& path, const Palette& palette) {
  const int nx = field.window.nx;
  const int ny = field.window.ny;
  std::string out = "P6\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(nx) * ny * 3);
  for (int iy = ny - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const ScanCell& cell = field.at(ix, iy);
      Rgb color = palette.background;
      switch (cell.status) {
        case Status::Inside:
          color = palette.inside;
          break;
        case Status::BoundaryCandidate:
          color = palette.boundary;
          break;
        case Status::Undefined:
          color = palette.undefined;
          break;
        case Status::Outside: {
          for (std::size_t k = 0; k < field.eps_levels.size(); ++k) {
            if (cell.eps < field.eps_levels[k]) {
              color = palette.bands.empty()
                          ? palette.background
                          : palette.bands[k % palette.bands.size()];
              break;
            }
          }
          break;
        }
      }
      out += static_cast<char>(color.r);
      out += static_cast<char>(color.g);
      out += static_cast<char>(color.b);
    }
  }
  atomic_write(path, out, true);
}

}  // namespace specrange
