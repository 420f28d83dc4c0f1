#pragma once

#include <string>
#include <vector>

#include "grw/fields.hpp"
#include "grw/mesh.hpp"

namespace grw {

// Subcommand entry points.  Each returns the process exit code:
//   0 success, 2 configuration/usage/assumption failure, 3 space-like guard,
//   4 numerical blow-up, 5 identity or geometry contract missed.
int cmd_run(const std::string& config_path);
int cmd_check_identities(const std::string& config_path, const std::vector<long>& ladder);
int cmd_check_geometry(const std::string& config_path);
int cmd_report(const std::string& dir);
int cmd_restart(const std::string& checkpoint_path);

// Plain-text field dump: `# s=<s> nx=<n> ny=<n|1> m=<m>` header, then grid
// values (one per line for m = 1, comma-separated rows for m = 2) at full
// double precision.
struct FieldDump {
  double s = 0.0;
  long nx = 0, ny = 1;
  int m = 1;
  ScalarField u;
};

void write_field_dump(const std::string& path, const BaseMesh& mesh,
                      const ScalarField& u, double s);
FieldDump read_field_dump(const std::string& path);

std::string format_g17(double x);

}  // namespace grw
