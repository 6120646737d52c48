#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace nsac {

using Point = std::array<double, 3>;

/// A simplex of the triangulation. Only the first dim+1 entries of the
/// fixed-size arrays are meaningful.
struct Element {
  std::array<int, 4> vertex{};      ///< periodic vertex class ids
  std::array<Point, 4> coords{};    ///< coordinates of this element's own (unwrapped) copy
  std::array<int, 4> face{};        ///< global face opposite local vertex i
  double volume = 0.0;
  double diameter = 0.0;
};

/// A face shared by exactly two elements. The normal points from
/// element[0] ("in") to element[1] ("out"), and element[0] < element[1].
struct Face {
  std::array<int, 2> element{};
  std::array<int, 2> local_face{};  ///< index of this face inside each element
  /// Face vertices listed in one common order, as local vertex indices of
  /// each side. Row 0 is the in side, row 1 the out side.
  std::array<std::array<int, 3>, 2> local_vertices{};
  Point normal{};
  /// Coordinates of the out element's copy minus those of the in copy along
  /// the shared face: zero for faces inside the box, a multiple of the
  /// domain length for faces on the periodic seam.
  Point shift{};
  double area = 0.0;
};

struct TraceSides {
  int in = -1;
  int out = -1;
  Point normal{};
};

struct MeshStatistics {
  double h = 0.0;
  double h_min = 0.0;
  double h_max = 0.0;
  double quasi_uniformity = 0.0;  ///< h_max / h_min
};

/// Periodic simplicial triangulation of the flat torus [-1,1]^d.
///
/// Built from a uniform grid of n^d cubes, each split into d! simplices
/// (two triangles per square, six Kuhn tetrahedra per cube). Opposite
/// boundary vertices are merged into one vertex class, so every face of the
/// resulting mesh is interior. Immutable after construction.
class Mesh {
 public:
  /// Throws std::invalid_argument for n_per_axis < 1 or dim not in {2,3}.
  static Mesh uniform_torus(int n_per_axis, int dim);

  int dim() const { return dim_; }
  int cells_per_axis() const { return n_; }
  int vertices_per_element() const { return dim_ + 1; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_elements() const { return elements_.size(); }
  std::size_t num_faces() const { return faces_.size(); }

  /// Representative coordinates of each vertex class, inside [-1,1)^d.
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Face>& faces() const { return faces_; }
  const Element& element(int k) const;
  const Face& face(int sigma) const;

  /// Global mesh size h = max_K h_K.
  double h() const { return h_; }
  double domain_length() const { return 2.0; }
  double domain_volume() const;

  /// (in, out, n) with the fixed per-face orientation.
  TraceSides trace_sides(int sigma) const;
  /// Same face seen from `element`: `in` is `element` and the normal points
  /// out of it. Throws if the element does not own the face.
  TraceSides trace_sides_from(int sigma, int element) const;

  MeshStatistics statistics() const;

  /// Plain-text dump: header comments, then vertex, element and face blocks
  /// with one record per line.
  void write(std::ostream& os) const;

 private:
  int dim_ = 2;
  int n_ = 1;
  double h_ = 0.0;
  std::vector<Point> vertices_;
  std::vector<Element> elements_;
  std::vector<Face> faces_;
};

}  // namespace nsac
