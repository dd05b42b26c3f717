#include <cmath>

#include "conifold/mesh.hpp"

namespace conifold {

FemOperators assemble(const TriangleMesh& mesh) {
  const int n = mesh.vertex_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(mesh.faces.size() * 12);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(n);
  double min_angle = 180.0, area_total = 0.0;

  for (const auto& f : mesh.faces) {
    const Eigen::Vector3d &a = mesh.vertices[f[0]], &b = mesh.vertices[f[1]],
                          &c = mesh.vertices[f[2]];
    const double area = 0.5 * (b - a).cross(c - a).norm();
    if (!(area > 0.0))
      fail(ErrorKind::InvalidInput, "degenerate face (zero area)");
    area_total += area;
    for (int k = 0; k < 3; ++k) mass[f[k]] += area / 3.0;

    // half-cotangent of the angle at each corner weights the opposite edge
    for (int corner = 0; corner < 3; ++corner) {
      const int i0 = f[corner], i1 = f[(corner + 1) % 3],
                i2 = f[(corner + 2) % 3];
      const Eigen::Vector3d u = mesh.vertices[i1] - mesh.vertices[i0];
      const Eigen::Vector3d v = mesh.vertices[i2] - mesh.vertices[i0];
      const double cross = u.cross(v).norm();
      const double w = 0.5 * u.dot(v) / cross;
      trips.emplace_back(i1, i1, w);
      trips.emplace_back(i2, i2, w);
      trips.emplace_back(i1, i2, -w);
      trips.emplace_back(i2, i1, -w);
      const double ang =
          std::acos(std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0));
      min_angle = std::min(min_angle, ang * 180.0 / M_PI);
    }
  }

  FemOperators ops;
  ops.stiffness.resize(n, n);
  ops.stiffness.setFromTriplets(trips.begin(), trips.end());
  ops.stiffness.makeCompressed();
  ops.mass = std::move(mass);
  ops.min_angle_deg = min_angle;
  ops.total_area = area_total;
  return ops;
}

}  // namespace conifold
