#ifndef NEV_IO_HPP
#define NEV_IO_HPP

#include <string>

#include "nev/dodge.hpp"

namespace nev::io {

/// Decimal formatting with 17 significant digits (round-trip exact).
std::string fmt(double x);

// Domain file: {"K": int, "coeff_x": [[re,im],...], "coeff_y": [[re,im],...]}
geom::BoundaryCurve read_domain(const std::string& path);
void write_domain(const std::string& path, const geom::BoundaryCurve& curve);

// Potential file: {"origin":[x,y], "h": f, "nx": int, "ny": int, "values": [...]}
pot::PotentialGrid read_potential(const std::string& path);
void write_potential(const std::string& path, const pot::PotentialGrid& grid);

// Deformation file: {"field_x": [[re,im],...], "field_y": [[re,im],...],
//                    "sigma_arc": [s0, s1], "v_margin": r}
geom::DeformationField read_field(const std::string& path);
void write_field(const std::string& path, const geom::DeformationField& field);

// Plan file: {"target": f, "delta": f, "sigma_arc": [s0,s1], "v_margin": f,
//             "max_iter": int, "seed": int}
dodge::DodgePlan read_plan(const std::string& path);

// Boundary-condition file: {"f2": [[re,im],...]} aligned with the nodes.
layer::BoundaryDensity read_bc(const std::string& path);

void write_scan_csv(const std::string& path, const scan::ScanReport& rep);
void write_scan_json(const std::string& path, const scan::ScanReport& rep);

/// sigma_min curve on a log scale with detected dips marked.
void write_scan_svg(const std::string& path, const scan::ScanReport& rep);

/// Before/after domain overlay with the frozen arc highlighted.
void write_overlay_svg(const std::string& path, const geom::BoundaryCurve& before,
                       const geom::BoundaryCurve& after, double sigma0, double sigma1);

}  // namespace nev::io

#endif
