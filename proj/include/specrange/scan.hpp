#pragma once

#include <array>
#include <string>
#include <vector>

#include "specrange/enclosure.hpp"

namespace specrange {

/// Rectangular complex scan window with an nx x ny cell grid; cells are
/// sampled at their centers.
struct Window {
  double re_min = 0.0, re_max = 0.0;
  double im_min = 0.0, im_max = 0.0;
  int nx = 0, ny = 0;

  void validate() const;
  double dx() const { return (re_max - re_min) / nx; }
  double dy() const { return (im_max - im_min) / ny; }
  Complex center(int ix, int iy) const {
    return {re_min + (ix + 0.5) * dx(), im_min + (iy + 0.5) * dy()};
  }
};

struct ScanCell {
  Status status = Status::Undefined;
  double eps = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();
  bool skeleton = false;
};

struct ScanField {
  Window window;
  std::vector<double> eps_levels;
  std::vector<ScanCell> cells;  // row-major, im varying slowest
  int undefined_cells = 0;

  const ScanCell& at(int ix, int iy) const {
    return cells[static_cast<std::size_t>(iy) * window.nx + ix];
  }
};

struct ScanOptions {
  double tau = kWitnessTol;
  bool skeleton_flag = false;  // also classify cells against the (n-2)-skeleton
  int threads = 1;
};

/// Classifies every cell center: status from the n = 2 fast paths or the
/// general path, eps from the constrained least squares, bound = 1/eps.
/// Cells at poles are marked undefined.
ScanField scan_grid(const ProblemSpec& spec, const Region& region, const Window& window,
                    std::vector<double> eps_levels, const ScanOptions& options = {});

/// CSV rows `re,im,status,eps,bound,skeleton`, row-major with im varying
/// slowest; floats at 17 significant digits, infinity printed as `inf`,
/// undefined cells leave eps/bound empty.
void write_csv(const ScanField& field, const std::string& path);

struct Rgb {
  unsigned char r = 0, g = 0, b = 0;
};

struct Palette {
  Rgb inside{140, 20, 20};
  Rgb boundary{250, 220, 90};
  Rgb undefined{0, 0, 0};
  Rgb background{25, 25, 35};
  // level bands, innermost first; cells with eps below the k-th eps level use
  // band k (cycled if fewer colors than levels)
  std::vector<Rgb> bands{{220, 120, 60}, {240, 170, 100}, {250, 210, 150}};
};

/// Binary P6 image, one pixel per cell, top row = im_max side. Deterministic
/// bytes for a given field and palette.
void write_ppm(const ScanField& field, const std::string& path,
               const Palette& palette = {});

}  // namespace specrange
