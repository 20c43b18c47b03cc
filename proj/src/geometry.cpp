// SPDX-License-Identifier: Apache-2.0

#include "losmimo/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "losmimo/errors.hpp"

namespace losmimo::geometry {

std::string_view to_string(ArrayShape shape) {
  switch (shape) {
    case ArrayShape::circular:
      return "circular";
    case ArrayShape::linear:
      return "linear";
    case ArrayShape::rectangular:
      return "rectangular";
  }
  return "unknown";
}

ArrayShape parse_shape(std::string_view name) {
  if (name == "circular") return ArrayShape::circular;
  if (name == "linear") return ArrayShape::linear;
  if (name == "rectangular") return ArrayShape::rectangular;
  throw ConfigError("array_shape must be one of circular, linear, rectangular (got '" + std::string(name) + "')");
}

double ArrayLayout::aperture() const {
  if (shape == ArrayShape::circular) return static_cast<double>(elements.size()) * carrier_wavelength / (2.0 * std::numbers::pi);
  const double half = carrier_wavelength / 2.0;
  return std::hypot((cols - 1) * half, (rows - 1) * half);
}

namespace {

int square_rows(int antennas) {
  int rows = 1;
  for (int r = 1; r * r <= antennas; ++r)
    if (antennas % r == 0) rows = r;
  return rows;
}

}  // namespace

ArrayLayout build_array(ArrayShape shape, int antennas, double carrier_hz, Vec2 ground_center, double height,
                        ArrayOptions options) {
  if (antennas < 1) throw ConfigError("array needs M >= 1 antennas (got " + std::to_string(antennas) + ")");
  if (!(carrier_hz > 0.0)) throw ConfigError("carrier frequency must be positive");

  ArrayLayout layout;
  layout.shape = shape;
  layout.carrier_wavelength = wavelength(carrier_hz);
  layout.center = {ground_center.x, ground_center.y, height};
  layout.elements.reserve(static_cast<std::size_t>(antennas));
  const double lambda = layout.carrier_wavelength;
  const double spacing = lambda / 2.0;

  switch (shape) {
    case ArrayShape::circular: {
      // Circumference M * lambda/2, hence radius M * lambda / (4 pi).
      const double radius = antennas * lambda / (4.0 * std::numbers::pi);
      for (int m = 0; m < antennas; ++m) {
        const double angle = 2.0 * std::numbers::pi * m / antennas;
        layout.elements.push_back({ground_center.x + radius * std::cos(angle),
                                   ground_center.y + radius * std::sin(angle), height});
      }
      layout.rows = 1;
      layout.cols = antennas;
      break;
    }
    case ArrayShape::linear: {
      for (int m = 0; m < antennas; ++m)
        layout.elements.push_back({ground_center.x + (m - (antennas - 1) / 2.0) * spacing, ground_center.y, height});
      layout.rows = 1;
      layout.cols = antennas;
      break;
    }
    case ArrayShape::rectangular: {
      const int rows = options.rect_rows > 0 ? options.rect_rows : square_rows(antennas);
      if (antennas % rows != 0)
        throw ConfigError("rectangular array with " + std::to_string(rows) + " rows needs M divisible by " +
                          std::to_string(rows) + " (got M = " + std::to_string(antennas) + ")");
      const int cols = antennas / rows;
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
          layout.elements.push_back({ground_center.x + (c - (cols - 1) / 2.0) * spacing,
                                     ground_center.y + (r - (rows - 1) / 2.0) * spacing, height});
      layout.rows = rows;
      layout.cols = cols;
      break;
    }
  }
  return layout;
}

CellLayout build_single_cell(double radius) { return {{Vec2{0.0, 0.0}}, radius}; }

CellLayout build_seven_cells(double radius, double intersite) {
  if (!(intersite > 0.0)) throw ConfigError("intersite distance must be positive");
  CellLayout layout;
  layout.radius = radius;
  layout.centers.push_back({0.0, 0.0});
  for (int k = 0; k < 6; ++k) {
    const double angle = k * std::numbers::pi / 3.0;
    layout.centers.push_back({intersite * std::cos(angle), intersite * std::sin(angle)});
  }
  return layout;
}

void place_terminals(Rng& rng, int terminals, Vec2 cell_center, int cell_index, double radius,
                     double terminal_height, TerminalPlacement& out) {
  for (int k = 0; k < terminals; ++k) {
    const double r = radius * std::sqrt(rng.uniform());
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    out.positions.push_back({cell_center.x + r * std::cos(angle), cell_center.y + r * std::sin(angle), terminal_height});
    out.cell_index.push_back(cell_index);
  }
}

TerminalPlacement place_terminals(Rng& rng, int terminals, Vec2 cell_center, double radius, double terminal_height) {
  TerminalPlacement out;
  out.positions.reserve(static_cast<std::size_t>(std::max(terminals, 0)));
  place_terminals(rng, terminals, cell_center, 0, radius, terminal_height, out);
  return out;
}

}  // namespace losmimo::geometry
