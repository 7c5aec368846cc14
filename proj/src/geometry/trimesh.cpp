#include "pscal/geometry/trimesh.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>

#include <fmt/format.h>

#include "pscal/error.hpp"

namespace pscal::geometry {

namespace {

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

std::string next_data_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
  }
  return {};
}

void append_polygon(TriMesh& mesh, const std::vector<int>& poly, const std::string& where) {
  if (poly.size() < 3) throw InputError(fmt::format("{}: polygon with fewer than 3 vertices", where));
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) mesh.faces.push_back({poly[0], poly[i], poly[i + 1]});
}

}  // namespace

MeshTopology check_closed_orientable(const TriMesh& mesh) {
  const int nv = static_cast<int>(mesh.vertices.size());
  if (nv == 0 || mesh.faces.empty()) throw TopologyError("mesh is empty");

  std::vector<char> referenced(nv, 0);
  std::unordered_map<std::uint64_t, int> directed;
  directed.reserve(mesh.faces.size() * 3);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& t = mesh.faces[f];
    for (int c = 0; c < 3; ++c) {
      if (t[c] < 0 || t[c] >= nv)
        throw TopologyError(fmt::format("face {} references vertex {} out of range", f, t[c]));
      referenced[t[c]] = 1;
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw TopologyError(fmt::format("face {} is degenerate (repeated vertex)", f));
    const Eigen::Vector3d n =
        (mesh.vertices[t[1]] - mesh.vertices[t[0]]).cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]);
    if (!(n.norm() > 0.0)) throw TopologyError(fmt::format("face {} has zero area", f));
    for (int c = 0; c < 3; ++c) {
      const int a = t[c];
      const int b = t[(c + 1) % 3];
      if (++directed[edge_key(a, b)] > 1)
        throw TopologyError(fmt::format(
            "edge ({}, {}) is used twice with the same orientation: mesh is non-manifold or not "
            "consistently oriented",
            a, b));
    }
  }

  int undirected = 0;
  for (const auto& [key, count] : directed) {
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffffu);
    if (!directed.contains(edge_key(b, a)))
      throw TopologyError(fmt::format("boundary edge ({}, {}): mesh is not closed", a, b));
    if (a < b) ++undirected;
  }

  for (int v = 0; v < nv; ++v)
    if (!referenced[v]) throw TopologyError(fmt::format("vertex {} is not used by any face", v));

  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& t : mesh.faces) {
    const int r0 = find_root(parent, t[0]);
    for (int c = 1; c < 3; ++c) parent[find_root(parent, t[c])] = r0;
  }
  const int root = find_root(parent, 0);
  for (int v = 1; v < nv; ++v)
    if (find_root(parent, v) != root) throw TopologyError("mesh is not connected");

  MeshTopology topo;
  topo.vertices = nv;
  topo.edges = undirected;
  topo.faces = static_cast<int>(mesh.faces.size());
  topo.euler_characteristic = topo.vertices - topo.edges + topo.faces;
  if (topo.euler_characteristic % 2 != 0)
    throw TopologyError(fmt::format("odd Euler characteristic {}", topo.euler_characteristic));
  topo.genus = (2 - topo.euler_characteristic) / 2;
  return topo;
}

TriMesh make_icosphere(int level, double radius) {
  if (level < 0) throw DomainError("icosphere level must be >= 0");
  if (!(radius > 0.0)) throw DomainError("icosphere radius must be positive");

  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh mesh;
  mesh.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                   {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  mesh.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (auto& v : mesh.vertices) v.normalize();

  for (int l = 0; l < level; ++l) {
    std::unordered_map<std::uint64_t, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = edge_key(std::min(a, b), std::max(a, b));
      if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
      mesh.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]).normalized());
      const int id = static_cast<int>(mesh.vertices.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> refined;
    refined.reserve(mesh.faces.size() * 4);
    for (const auto& f : mesh.faces) {
      const int a = mid(f[0], f[1]);
      const int b = mid(f[1], f[2]);
      const int c = mid(f[2], f[0]);
      refined.push_back({f[0], a, c});
      refined.push_back({f[1], b, a});
      refined.push_back({f[2], c, b});
      refined.push_back({a, b, c});
    }
    mesh.faces = std::move(refined);
  }
  for (auto& v : mesh.vertices) v *= radius;
  return mesh;
}

TriMesh read_off(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open mesh file '{}'", path.string()));

  std::string header = next_data_line(in);
  std::istringstream hs(header);
  std::string tag;
  hs >> tag;
  if (tag != "OFF") throw InputError(fmt::format("'{}': missing OFF header", path.string()));
  long nv = -1, nf = -1, ne = 0;
  if (!(hs >> nv >> nf >> ne)) {
    std::istringstream cs(next_data_line(in));
    if (!(cs >> nv >> nf)) throw InputError(fmt::format("'{}': bad OFF counts line", path.string()));
  }
  if (nv <= 0 || nf <= 0) throw InputError(fmt::format("'{}': empty OFF mesh", path.string()));

  TriMesh mesh;
  mesh.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    std::istringstream ls(next_data_line(in));
    double x, y, z;
    if (!(ls >> x >> y >> z)) throw InputError(fmt::format("'{}': bad vertex line {}", path.string(), i));
    mesh.vertices.emplace_back(x, y, z);
  }
  for (long i = 0; i < nf; ++i) {
    std::istringstream ls(next_data_line(in));
    int n = 0;
    if (!(ls >> n)) throw InputError(fmt::format("'{}': bad face line {}", path.string(), i));
    std::vector<int> poly(n);
    for (auto& idx : poly)
      if (!(ls >> idx)) throw InputError(fmt::format("'{}': truncated face line {}", path.string(), i));
    append_polygon(mesh, poly, path.string());
  }
  return mesh;
}

TriMesh read_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open mesh file '{}'", path.string()));
  TriMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw InputError(fmt::format("'{}': bad vertex '{}'", path.string(), line));
      mesh.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> poly;
      std::string tok;
      while (ls >> tok) {
        const int raw = std::stoi(tok.substr(0, tok.find('/')));
        const int nv = static_cast<int>(mesh.vertices.size());
        poly.push_back(raw > 0 ? raw - 1 : nv + raw);
      }
      append_polygon(mesh, poly, path.string());
    }
  }
  if (mesh.vertices.empty()) throw InputError(fmt::format("'{}': no vertices", path.string()));
  return mesh;
}

TriMesh read_mesh(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".off") return read_off(path);
  if (ext == ".obj") return read_obj(path);
  throw InputError(fmt::format("unsupported mesh format '{}' (expected .off or .obj)", ext));
}

void write_off(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.faces.size() << " 0\n";
  out.precision(17);
  for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

double mean_edge_length(const TriMesh& mesh) {
  double total = 0.0;
  for (const auto& f : mesh.faces)
    for (int c = 0; c < 3; ++c) total += (mesh.vertices[f[(c + 1) % 3]] - mesh.vertices[f[c]]).norm();
  return total / (3.0 * static_cast<double>(mesh.faces.size()));
}

}  // namespace pscal::geometry
