#pragma once

#include <filesystem>
#include <iosfwd>

#include "fpo/continuation.hpp"
#include "fpo/solve.hpp"

namespace fpo {

/// Orbit and branch persistence: a line-oriented key/value text format,
/// schema version 1, doubles serialized with 17 significant digits so
/// read(write(x)) reproduces every numeric field exactly. CSV is export
/// only.

void write_orbit(const SolvedOrbit& orb, const std::filesystem::path& path);
void write_orbit(const SolvedOrbit& orb, std::ostream& os);
SolvedOrbit read_orbit(const std::filesystem::path& path);
SolvedOrbit read_orbit(std::istream& is);

void write_branch(const Branch& branch, const std::filesystem::path& path);
Branch read_branch(const std::filesystem::path& path);

enum class ExportKind { Trajectory, Symmetric, BranchSummary };

/// Trajectory/symmetric exports: columns t,q1,q2,v1,v2,E (the symmetric
/// variant reflects the half arc onto [0, 2T]).
void export_csv(const SolvedOrbit& orb, const std::filesystem::path& path, ExportKind kind);

/// Branch summary: one row per orbit with the headline quantities.
void export_csv(const Branch& branch, const std::filesystem::path& path, ExportKind kind);

}  // namespace fpo
