#include "nsac/mesh.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nsac {

namespace {

using IntPoint = std::array<int, 3>;

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Corner offsets of the simplices of one unit cell. The split is the same
// in every cell, so it is invariant under lattice translations and the
// periodic faces match up.
std::vector<std::vector<IntPoint>> cell_simplices(int dim) {
  if (dim == 2) {
    return {{IntPoint{0, 0, 0}, IntPoint{1, 0, 0}, IntPoint{1, 1, 0}},
            {IntPoint{0, 0, 0}, IntPoint{1, 1, 0}, IntPoint{0, 1, 0}}};
  }
  // Kuhn split: one tetrahedron per permutation of the axes.
  std::vector<std::vector<IntPoint>> tets;
  std::array<int, 3> perm{0, 1, 2};
  do {
    std::vector<IntPoint> t;
    IntPoint p{0, 0, 0};
    t.push_back(p);
    for (int axis : perm) {
      p[axis] += 1;
      t.push_back(p);
    }
    tets.push_back(t);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return tets;
}

struct Incidence {
  int element;
  int local_face;
  IntPoint translation;
  std::array<int, 3> local_vertices;
};

}  // namespace

Mesh Mesh::uniform_torus(int n_per_axis, int dim) {
  if (n_per_axis < 1) {
    throw std::invalid_argument("uniform_torus: n_per_axis must be >= 1, got " +
                                std::to_string(n_per_axis));
  }
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("uniform_torus: dimension must be 2 or 3, got " +
                                std::to_string(dim));
  }

  Mesh mesh;
  mesh.dim_ = dim;
  mesh.n_ = n_per_axis;
  const int n = n_per_axis;
  const double spacing = 2.0 / n;
  const int nv = dim + 1;

  auto vertex_class = [&](const IntPoint& p) {
    int id = 0;
    int stride = 1;
    for (int c = 0; c < dim; ++c) {
      id += ((p[c] % n + n) % n) * stride;
      stride *= n;
    }
    return id;
  };

  int num_classes = 1;
  for (int c = 0; c < dim; ++c) num_classes *= n;
  mesh.vertices_.resize(static_cast<std::size_t>(num_classes));
  for (int id = 0; id < num_classes; ++id) {
    Point x{0.0, 0.0, 0.0};
    int rest = id;
    for (int c = 0; c < dim; ++c) {
      x[c] = -1.0 + spacing * (rest % n);
      rest /= n;
    }
    mesh.vertices_[static_cast<std::size_t>(id)] = x;
  }

  const auto simplices = cell_simplices(dim);
  std::vector<std::array<IntPoint, 4>> int_coords;

  const int cells_z = dim == 3 ? n : 1;
  for (int k = 0; k < cells_z; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const IntPoint base{i, j, dim == 3 ? k : 0};
        for (const auto& simplex : simplices) {
          Element e;
          std::array<IntPoint, 4> ic{};
          for (int a = 0; a < nv; ++a) {
            IntPoint p{};
            for (int c = 0; c < 3; ++c) p[c] = base[c] + simplex[a][c];
            ic[a] = p;
            e.vertex[a] = vertex_class(p);
            for (int c = 0; c < dim; ++c) e.coords[a][c] = -1.0 + spacing * p[c];
          }
          mesh.elements_.push_back(e);
          int_coords.push_back(ic);
        }
      }
    }
  }

  // Geometry: volume, diameter and barycentric gradients.
  std::vector<std::array<Eigen::Vector3d, 4>> grad_lambda(mesh.elements_.size());
  for (std::size_t e = 0; e < mesh.elements_.size(); ++e) {
    Element& el = mesh.elements_[e];
    Eigen::MatrixXd jac(dim, dim);
    for (int a = 1; a < nv; ++a) {
      for (int c = 0; c < dim; ++c) jac(c, a - 1) = el.coords[a][c] - el.coords[0][c];
    }
    const double det = jac.determinant();
    double fact = 1.0;
    for (int m = 2; m <= dim; ++m) fact *= m;
    el.volume = std::abs(det) / fact;
    const Eigen::MatrixXd inv = jac.inverse();
    Eigen::Vector3d g0 = Eigen::Vector3d::Zero();
    for (int a = 1; a < nv; ++a) {
      Eigen::Vector3d g = Eigen::Vector3d::Zero();
      for (int c = 0; c < dim; ++c) g[c] = inv(a - 1, c);
      grad_lambda[e][a] = g;
      g0 -= g;
    }
    grad_lambda[e][0] = g0;
    double diam = 0.0;
    for (int a = 0; a < nv; ++a) {
      for (int b = a + 1; b < nv; ++b) {
        double d2 = 0.0;
        for (int c = 0; c < dim; ++c) {
          const double dx = el.coords[a][c] - el.coords[b][c];
          d2 += dx * dx;
        }
        diam = std::max(diam, std::sqrt(d2));
      }
    }
    el.diameter = diam;
    mesh.h_ = std::max(mesh.h_, diam);
  }

  // Faces: match the two copies of each face through a translation-reduced key.
  std::map<std::vector<int>, int> face_index;
  std::vector<std::vector<Incidence>> incidences;
  for (std::size_t e = 0; e < mesh.elements_.size(); ++e) {
    for (int f = 0; f < nv; ++f) {
      std::vector<std::pair<IntPoint, int>> fv;
      for (int a = 0; a < nv; ++a) {
        if (a != f) fv.emplace_back(int_coords[e][a], a);
      }
      std::sort(fv.begin(), fv.end());
      IntPoint t{0, 0, 0};
      for (int c = 0; c < dim; ++c) t[c] = n * floor_div(fv.front().first[c], n);
      std::vector<int> key;
      Incidence inc{static_cast<int>(e), f, t, {0, 0, 0}};
      for (std::size_t m = 0; m < fv.size(); ++m) {
        for (int c = 0; c < dim; ++c) key.push_back(fv[m].first[c] - t[c]);
        inc.local_vertices[m] = fv[m].second;
      }
      auto [it, inserted] = face_index.emplace(key, static_cast<int>(incidences.size()));
      if (inserted) incidences.emplace_back();
      incidences[static_cast<std::size_t>(it->second)].push_back(inc);
      mesh.elements_[e].face[f] = it->second;
    }
  }

  mesh.faces_.reserve(incidences.size());
  for (const auto& list : incidences) {
    if (list.size() != 2 || list[0].element == list[1].element) {
      throw std::logic_error("uniform_torus: face without two distinct neighbours");
    }
    const Incidence& in = list[0];
    const Incidence& out = list[1];
    Face face;
    face.element = {in.element, out.element};
    face.local_face = {in.local_face, out.local_face};
    face.local_vertices = {in.local_vertices, out.local_vertices};
    const Eigen::Vector3d& g = grad_lambda[static_cast<std::size_t>(in.element)][in.local_face];
    const double gnorm = g.norm();
    for (int c = 0; c < 3; ++c) {
      face.normal[c] = -g[c] / gnorm;
      face.shift[c] = spacing * (out.translation[c] - in.translation[c]);
    }
    face.area = dim * mesh.elements_[static_cast<std::size_t>(in.element)].volume * gnorm;
    mesh.faces_.push_back(face);
  }
  return mesh;
}

const Element& Mesh::element(int k) const {
  if (k < 0 || static_cast<std::size_t>(k) >= elements_.size()) {
    throw std::out_of_range("Mesh::element: invalid element id " + std::to_string(k));
  }
  return elements_[static_cast<std::size_t>(k)];
}

const Face& Mesh::face(int sigma) const {
  if (sigma < 0 || static_cast<std::size_t>(sigma) >= faces_.size()) {
    throw std::out_of_range("Mesh::face: invalid face id " + std::to_string(sigma));
  }
  return faces_[static_cast<std::size_t>(sigma)];
}

double Mesh::domain_volume() const { return std::pow(domain_length(), dim_); }

TraceSides Mesh::trace_sides(int sigma) const {
  const Face& f = face(sigma);
  return TraceSides{f.element[0], f.element[1], f.normal};
}

TraceSides Mesh::trace_sides_from(int sigma, int element) const {
  TraceSides s = trace_sides(sigma);
  if (element == s.in) return s;
  if (element != s.out) {
    throw std::invalid_argument("Mesh::trace_sides_from: element " + std::to_string(element) +
                                " does not own face " + std::to_string(sigma));
  }
  std::swap(s.in, s.out);
  for (double& c : s.normal) c = -c;
  return s;
}

MeshStatistics Mesh::statistics() const {
  MeshStatistics s;
  s.h_min = elements_.empty() ? 0.0 : elements_.front().diameter;
  for (const Element& e : elements_) {
    s.h_min = std::min(s.h_min, e.diameter);
    s.h_max = std::max(s.h_max, e.diameter);
  }
  s.h = s.h_max;
  s.quasi_uniformity = s.h_min > 0.0 ? s.h_max / s.h_min : 0.0;
  return s;
}

void Mesh::write(std::ostream& os) const {
  const int nv = dim_ + 1;
  const auto old_precision = os.precision();
  os << std::setprecision(17);
  os << "# nsac mesh v1\n";
  os << "# dim " << dim_ << " n " << n_ << "\n";
  os << "# vertex record:  id x_1..x_d\n";
  os << "# element record: id v_0..v_d volume diameter\n";
  os << "# face record:    id in out area n_1..n_d\n";
  os << "vertices " << vertices_.size() << "\n";
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    os << v;
    for (int c = 0; c < dim_; ++c) os << ' ' << vertices_[v][c];
    os << "\n";
  }
  os << "elements " << elements_.size() << "\n";
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    os << e;
    for (int a = 0; a < nv; ++a) os << ' ' << elements_[e].vertex[a];
    os << ' ' << elements_[e].volume << ' ' << elements_[e].diameter << "\n";
  }
  os << "faces " << faces_.size() << "\n";
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const Face& fc = faces_[f];
    os << f << ' ' << fc.element[0] << ' ' << fc.element[1] << ' ' << fc.area;
    for (int c = 0; c < dim_; ++c) os << ' ' << fc.normal[c];
    os << "\n";
  }
  os.precision(old_precision);
}

}  // namespace nsac
