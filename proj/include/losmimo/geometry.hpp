// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "losmimo/rng.hpp"

namespace losmimo {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double horizontal_distance(const Vec3& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline constexpr double kSpeedOfLight = 299792458.0;

inline double wavelength(double carrier_hz) { return kSpeedOfLight / carrier_hz; }

}  // namespace losmimo

namespace losmimo::geometry {

enum class ArrayShape { circular, linear, rectangular };

std::string_view to_string(ArrayShape shape);
ArrayShape parse_shape(std::string_view name);

struct ArrayOptions {
  /// Rows of a rectangular array; must divide M. Zero selects the most square
  /// exact factorization (largest divisor of M not above sqrt(M)).
  int rect_rows = 2;
};

/// Element positions of a horizontal base-station array.
struct ArrayLayout {
  std::vector<Vec3> elements;
  ArrayShape shape = ArrayShape::circular;
  double carrier_wavelength = 0.0;
  Vec3 center;
  int rows = 1;
  int cols = 1;

  std::size_t size() const { return elements.size(); }

  /// Circular: M*lambda/(2*pi). Linear and rectangular: the largest extent.
  double aperture() const;
};

/// Builds an M-element array at half-wavelength spacing centered above
/// `ground_center` at `height`. Circular elements are spaced lambda/2 along the
/// arc; linear runs along x; rectangular is a rows x cols grid in the x-y plane.
/// Throws ConfigError for M < 1, non-positive carrier or an M that the
/// requested rectangle cannot hold.
ArrayLayout build_array(ArrayShape shape, int antennas, double carrier_hz, Vec2 ground_center, double height,
                        ArrayOptions options = {});

/// Diameter of a circular half-wavelength array with M elements.
inline double circular_diameter(int antennas, double carrier_hz) {
  return antennas * wavelength(carrier_hz) / (2.0 * std::numbers::pi);
}

struct CellLayout {
  std::vector<Vec2> centers;
  double radius = 0.0;

  std::size_t size() const { return centers.size(); }
};

CellLayout build_single_cell(double radius);

/// Center cell plus six neighbours at `intersite` meters, at k*60 degrees.
CellLayout build_seven_cells(double radius, double intersite);

struct TerminalPlacement {
  std::vector<Vec3> positions;
  std::vector<int> cell_index;

  std::size_t size() const { return positions.size(); }
};

/// Appends K terminals drawn uniformly over the disc of radius R around
/// `cell_center` (r = R*sqrt(u), angle uniform) at height `terminal_height`.
void place_terminals(Rng& rng, int terminals, Vec2 cell_center, int cell_index, double radius,
                     double terminal_height, TerminalPlacement& out);

TerminalPlacement place_terminals(Rng& rng, int terminals, Vec2 cell_center, double radius,
                                  double terminal_height);

}  // namespace losmimo::geometry
