#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "conifold/mesh.hpp"

namespace conifold {

namespace {

[[noreturn]] void parse_fail(const std::string& origin, int line,
                             const std::string& what) {
  fail(ErrorKind::InvalidInput,
       origin + ":" + std::to_string(line) + ": OFF parse error: " + what);
}

// Next content line: strips comments ('#' to end of line) and blanks.
bool next_line(std::istream& in, std::string& out, int& lineno) {
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    out = raw;
    return true;
  }
  return false;
}

}  // namespace

TriangleMesh parse_off(std::istream& in, const std::string& origin) {
  int lineno = 0;
  std::string line;
  if (!next_line(in, line, lineno)) parse_fail(origin, lineno, "empty file");
  {
    std::istringstream hs(line);
    std::string magic;
    hs >> magic;
    if (magic != "OFF")
      parse_fail(origin, lineno, "expected OFF header, got '" + magic + "'");
  }
  if (!next_line(in, line, lineno))
    parse_fail(origin, lineno, "missing element counts");
  long nv = 0, nf = 0, ne = 0;
  {
    std::istringstream cs(line);
    if (!(cs >> nv >> nf)) parse_fail(origin, lineno, "malformed counts line");
    cs >> ne;  // edge count is optional and ignored
    if (nv <= 0 || nf <= 0)
      parse_fail(origin, lineno, "mesh must have vertices and faces");
  }

  TriangleMesh mesh;
  mesh.vertices.reserve(size_t(nv));
  for (long i = 0; i < nv; ++i) {
    if (!next_line(in, line, lineno))
      parse_fail(origin, lineno, "unexpected end of file in vertex list");
    std::istringstream vs(line);
    double x, y, z;
    if (!(vs >> x >> y >> z))
      parse_fail(origin, lineno, "malformed vertex line");
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
      parse_fail(origin, lineno, "non-finite vertex coordinate");
    mesh.vertices.push_back({x, y, z});
  }

  mesh.faces.reserve(size_t(nf));
  for (long i = 0; i < nf; ++i) {
    if (!next_line(in, line, lineno))
      parse_fail(origin, lineno, "unexpected end of file in face list");
    std::istringstream fs(line);
    long k;
    if (!(fs >> k)) parse_fail(origin, lineno, "malformed face line");
    if (k != 3)
      fail(ErrorKind::InvalidInput,
           origin + ":" + std::to_string(lineno) + ": non-triangle face (" +
               std::to_string(k) + " vertices)");
    long a, b, c;
    if (!(fs >> a >> b >> c)) parse_fail(origin, lineno, "malformed face line");
    for (long idx : {a, b, c})
      if (idx < 0 || idx >= nv)
        fail(ErrorKind::InvalidInput,
             origin + ":" + std::to_string(lineno) +
                 ": face index out of range: " + std::to_string(idx));
    if (a == b || b == c || a == c)
      fail(ErrorKind::InvalidInput,
           origin + ":" + std::to_string(lineno) +
               ": degenerate face (repeated vertex)");
    mesh.faces.push_back({int(a), int(b), int(c)});
  }
  return mesh;
}

TriangleMesh load_off(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorKind::InvalidInput, "cannot open mesh file: " + path.string());
  return parse_off(in, path.filename().string());
}

MeshStats validate_mesh(const TriangleMesh& mesh) {
  if (mesh.vertices.empty() || mesh.faces.empty())
    fail(ErrorKind::InvalidInput, "mesh has no geometry");

  // undirected edge -> (face count, directed a<b count)
  std::map<std::pair<int, int>, std::pair<int, int>> edges;
  for (const auto& f : mesh.faces) {
    for (int c = 0; c < 3; ++c) {
      int a = f[c], b = f[(c + 1) % 3];
      auto key = std::minmax(a, b);
      auto& rec = edges[{key.first, key.second}];
      ++rec.first;
      if (a < b) ++rec.second;
    }
  }
  for (const auto& [key, rec] : edges) {
    std::string name = "(" + std::to_string(key.first) + "," +
                       std::to_string(key.second) + ")";
    if (rec.first == 1)
      fail(ErrorKind::InvalidInput, "boundary edge " + name +
                                        ": mesh must be closed");
    if (rec.first > 2)
      fail(ErrorKind::InvalidInput,
           "non-manifold edge " + name + " shared by " +
               std::to_string(rec.first) + " faces");
    // a consistently oriented closed surface traverses each edge once per
    // direction
    if (rec.second != 1)
      fail(ErrorKind::InvalidInput, "inconsistent orientation at edge " + name);
  }

  std::vector<char> used(mesh.vertices.size(), 0);
  for (const auto& f : mesh.faces)
    for (int k = 0; k < 3; ++k) used[f[k]] = 1;
  for (size_t i = 0; i < used.size(); ++i)
    if (!used[i])
      fail(ErrorKind::InvalidInput,
           "isolated vertex " + std::to_string(i) + " (not in any face)");

  // connected components over the face graph's vertex set
  std::vector<int> parent(mesh.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& f : mesh.faces) {
    parent[find(f[0])] = find(f[1]);
    parent[find(f[1])] = find(f[2]);
  }
  int components = 0;
  for (size_t i = 0; i < parent.size(); ++i)
    if (find(int(i)) == int(i)) ++components;

  double min_angle = 180.0, area = 0.0;
  for (const auto& f : mesh.faces) {
    const auto &a = mesh.vertices[f[0]], &b = mesh.vertices[f[1]],
               &c = mesh.vertices[f[2]];
    double fa = 0.5 * (b - a).cross(c - a).norm();
    area += fa;
    for (int corner = 0; corner < 3; ++corner) {
      const auto &p = mesh.vertices[f[corner]],
                 &q = mesh.vertices[f[(corner + 1) % 3]],
                 &r = mesh.vertices[f[(corner + 2) % 3]];
      Eigen::Vector3d u = q - p, v = r - p;
      double nu = u.norm(), nv2 = v.norm();
      if (nu == 0.0 || nv2 == 0.0)
        fail(ErrorKind::InvalidInput, "degenerate face (zero-length edge)");
      double cosang = std::clamp(u.dot(v) / (nu * nv2), -1.0, 1.0);
      min_angle = std::min(min_angle, std::acos(cosang) * 180.0 / M_PI);
    }
  }

  MeshStats st;
  st.vertices = mesh.vertex_count();
  st.edges = int(edges.size());
  st.faces = mesh.face_count();
  st.euler_characteristic = st.vertices - st.edges + st.faces;
  st.components = components;
  st.min_angle_deg = min_angle;
  st.total_area = area;
  return st;
}

}  // namespace conifold
