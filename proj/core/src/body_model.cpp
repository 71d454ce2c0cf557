#include "bodyfit/body_model.hpp"

#include "bodyfit/rotation.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace bodyfit {

using nlohmann::json;

Eigen::VectorXd FullParams::to_vector() const {
  Eigen::VectorXd v(dim());
  v.head(pose.size()) = pose;
  v.segment(pose.size(), shape.size()) = shape;
  v[dim() - 3] = camera.f;
  v[dim() - 2] = camera.tx;
  v[dim() - 1] = camera.ty;
  return v;
}

FullParams FullParams::from_vector(const Eigen::VectorXd& v, int joint_count,
                                   int shape_dim) {
  const int pose_dim = 3 * joint_count;
  if (v.size() != pose_dim + shape_dim + 3) {
    throw std::runtime_error("parameter vector has wrong dimension");
  }
  FullParams p;
  p.pose = v.head(pose_dim);
  p.shape = v.segment(pose_dim, shape_dim);
  p.camera = {v[pose_dim + shape_dim], v[pose_dim + shape_dim + 1],
              v[pose_dim + shape_dim + 2]};
  return p;
}

void validate_model(const BodyModel& m) {
  auto fail = [](const std::string& msg) { throw std::runtime_error(msg); };

  if (m.vertex_count <= 0 || m.template_vertices.rows() != m.vertex_count) {
    fail("template_vertices dimension mismatch");
  }
  if (m.joint_count <= 0) fail("joint_count must be positive");
  if (m.part_count <= 0) fail("part_count must be positive");
  if (static_cast<int>(m.shape_dirs.size()) != m.shape_dim) {
    fail("shape_dirs dimension mismatch");
  }
  for (const auto& d : m.shape_dirs) {
    if (d.rows() != m.vertex_count) fail("shape_dirs dimension mismatch");
  }
  if (m.joint_regressor.rows() != m.joint_count ||
      m.joint_regressor.cols() != m.vertex_count) {
    fail("joint_regressor dimension mismatch");
  }
  if (m.skin_weights.rows() != m.vertex_count ||
      m.skin_weights.cols() != m.joint_count) {
    fail("skin_weights dimension mismatch");
  }
  if (static_cast<int>(m.parents.size()) != m.joint_count) {
    fail("parents dimension mismatch");
  }
  if (m.vertex_iuv.rows() != m.vertex_count) {
    fail("vertex_iuv dimension mismatch");
  }

  if (m.parents[0] != -1) fail("kinematic tree root must have parent -1");
  for (int k = 1; k < m.joint_count; ++k) {
    if (m.parents[k] < 0 || m.parents[k] >= k) {
      fail("kinematic tree not topologically ordered");
    }
  }

  for (int f = 0; f < m.face_count(); ++f) {
    int part = -1;
    for (int c = 0; c < 3; ++c) {
      const int v = m.faces(f, c);
      if (v < 0 || v >= m.vertex_count) fail("faces index out of range");
      const int p = static_cast<int>(m.vertex_iuv(v, 0));
      if (part == -1) part = p;
      if (p != part) fail("faces straddle body parts");
    }
  }

  for (int v = 0; v < m.vertex_count; ++v) {
    const double sum = m.skin_weights.row(v).sum();
    if (std::abs(sum - 1.0) > 1e-6) fail("skin_weights row not normalized");
    if ((m.skin_weights.row(v).array() < -1e-12).any()) {
      fail("skin_weights row has negative entries");
    }
    const int part = static_cast<int>(m.vertex_iuv(v, 0));
    if (part < 1 || part > m.part_count) fail("vertex_iuv part id out of range");
    const double u = m.vertex_iuv(v, 1), uv = m.vertex_iuv(v, 2);
    if (u < 0 || u > 255 || uv < 0 || uv > 255) {
      fail("vertex_iuv coordinate out of [0,255]");
    }
  }
  for (int k = 0; k < m.joint_count; ++k) {
    if (std::abs(m.joint_regressor.row(k).sum() - 1.0) > 1e-6) {
      fail("joint_regressor row not normalized");
    }
  }
}

namespace {

json matrix_to_flat(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) a.push_back(m(r, c));
  }
  return a;
}

void flat_to_matrix(const json& a, Eigen::Ref<Eigen::MatrixXd> m,
                    const std::string& field) {
  if (!a.is_array() ||
      static_cast<Eigen::Index>(a.size()) != m.rows() * m.cols()) {
    throw std::runtime_error(field + " dimension mismatch");
  }
  Eigen::Index i = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = a[i++].get<double>();
  }
}

const json& require(const json& j, const std::string& field) {
  auto it = j.find(field);
  if (it == j.end()) throw std::runtime_error("missing field " + field);
  return *it;
}

}  // namespace

BodyModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("model file is not valid JSON: " +
                             std::string(e.what()));
  }

  BodyModel m;
  m.vertex_count = require(j, "V").get<int>();
  m.joint_count = require(j, "K_total").get<int>();
  m.shape_dim = require(j, "B").get<int>();
  m.part_count = require(j, "P").get<int>();
  if (m.vertex_count <= 0 || m.joint_count <= 0 || m.shape_dim < 0 ||
      m.part_count <= 0) {
    throw std::runtime_error("model header fields must be positive");
  }

  const int V = m.vertex_count, K = m.joint_count, B = m.shape_dim;

  m.template_vertices.resize(V, 3);
  flat_to_matrix(require(j, "template_vertices"), m.template_vertices,
                 "template_vertices");

  const json& jf = require(j, "faces");
  if (!jf.is_array() || jf.size() % 3 != 0) {
    throw std::runtime_error("faces dimension mismatch");
  }
  m.faces.resize(jf.size() / 3, 3);
  for (Eigen::Index i = 0; i < m.faces.rows(); ++i) {
    for (int c = 0; c < 3; ++c) m.faces(i, c) = jf[3 * i + c].get<int>();
  }

  // shape_dirs stored row-major as V x 3 x B
  const json& jd = require(j, "shape_dirs");
  if (!jd.is_array() || static_cast<int>(jd.size()) != V * 3 * B) {
    throw std::runtime_error("shape_dirs dimension mismatch");
  }
  m.shape_dirs.assign(B, Eigen::MatrixX3d(V, 3));
  for (int v = 0; v < V; ++v) {
    for (int c = 0; c < 3; ++c) {
      for (int b = 0; b < B; ++b) {
        m.shape_dirs[b](v, c) = jd[(v * 3 + c) * B + b].get<double>();
      }
    }
  }

  m.joint_regressor.resize(K, V);
  flat_to_matrix(require(j, "joint_regressor"), m.joint_regressor,
                 "joint_regressor");
  m.skin_weights.resize(V, K);
  flat_to_matrix(require(j, "skin_weights"), m.skin_weights, "skin_weights");

  const json& jp = require(j, "parents");
  if (!jp.is_array() || static_cast<int>(jp.size()) != K) {
    throw std::runtime_error("parents dimension mismatch");
  }
  m.parents.resize(K);
  for (int k = 0; k < K; ++k) m.parents[k] = jp[k].get<int>();

  m.vertex_iuv.resize(V, 3);
  flat_to_matrix(require(j, "vertex_iuv"), m.vertex_iuv, "vertex_iuv");

  validate_model(m);
  return m;
}

void save_model(const std::string& path, const BodyModel& m) {
  json j;
  j["version"] = 1;
  j["V"] = m.vertex_count;
  j["K_total"] = m.joint_count;
  j["B"] = m.shape_dim;
  j["P"] = m.part_count;
  j["template_vertices"] = matrix_to_flat(m.template_vertices);
  json jf = json::array();
  for (Eigen::Index f = 0; f < m.faces.rows(); ++f) {
    for (int c = 0; c < 3; ++c) jf.push_back(m.faces(f, c));
  }
  j["faces"] = jf;
  json jd = json::array();
  for (int v = 0; v < m.vertex_count; ++v) {
    for (int c = 0; c < 3; ++c) {
      for (int b = 0; b < m.shape_dim; ++b) jd.push_back(m.shape_dirs[b](v, c));
    }
  }
  j["shape_dirs"] = jd;
  j["joint_regressor"] = matrix_to_flat(m.joint_regressor);
  j["skin_weights"] = matrix_to_flat(m.skin_weights);
  j["parents"] = m.parents;
  j["vertex_iuv"] = matrix_to_flat(m.vertex_iuv);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file " + path);
  out << j.dump();
}

PosedMesh pose_mesh_cached(const BodyModel& model, const FullParams& params) {
  const int V = model.vertex_count, K = model.joint_count;
  if (params.pose.size() != 3 * K ||
      params.shape.size() != model.shape_dim) {
    throw std::runtime_error("params dimensions do not match model");
  }

  PosedMesh out;
  out.shaped = model.template_vertices;
  for (int b = 0; b < model.shape_dim; ++b) {
    out.shaped += params.shape[b] * model.shape_dirs[b];
  }
  out.rest_joints = model.joint_regressor * out.shaped;

  out.local_rot.resize(K);
  out.global_rot.resize(K);
  out.joint_pos.resize(K, 3);
  for (int k = 0; k < K; ++k) {
    out.local_rot[k] = rodrigues(params.pose.segment<3>(3 * k));
    if (k == 0) {
      out.global_rot[0] = out.local_rot[0];
      out.joint_pos.row(0) = out.rest_joints.row(0);
    } else {
      const int p = model.parents[k];
      out.global_rot[k] = out.global_rot[p] * out.local_rot[k];
      out.joint_pos.row(k) =
          out.joint_pos.row(p) +
          (out.global_rot[p] *
           (out.rest_joints.row(k) - out.rest_joints.row(p)).transpose())
              .transpose();
    }
  }

  out.mesh.vertices.setZero(V, 3);
  for (int k = 0; k < K; ++k) {
    // vertices rigidly attached to joint k: R_k*(x - j_k) + t_k
    const Eigen::Matrix3d& R = out.global_rot[k];
    const Eigen::RowVector3d offset =
        out.joint_pos.row(k) - out.rest_joints.row(k) * R.transpose();
    const auto w = model.skin_weights.col(k);
    out.mesh.vertices +=
        w.asDiagonal() * ((out.shaped * R.transpose()).rowwise() + offset);
  }
  out.mesh.joints3d = model.joint_regressor * out.mesh.vertices;
  return out;
}

MeshInstance pose_mesh(const BodyModel& model, const FullParams& params) {
  return pose_mesh_cached(model, params).mesh;
}

void pose_mesh_backward(const BodyModel& model, const FullParams& params,
                        const PosedMesh& cache, const Eigen::MatrixX3d& dvertices,
                        const Eigen::MatrixX3d& djoints,
                        const std::vector<Eigen::Matrix3d>& extra_dlocal_rot,
                        Eigen::VectorXd& dpose, Eigen::VectorXd& dshape) {
  const int V = model.vertex_count, K = model.joint_count;

  Eigen::MatrixX3d dposed = dvertices;
  if (djoints.rows() > 0) {
    dposed += model.joint_regressor.transpose() * djoints;
  }

  Eigen::MatrixX3d dshaped = Eigen::MatrixX3d::Zero(V, 3);
  Eigen::MatrixX3d drest = Eigen::MatrixX3d::Zero(K, 3);
  std::vector<Eigen::Matrix3d> dRg(K, Eigen::Matrix3d::Zero());
  Eigen::MatrixX3d dtg = Eigen::MatrixX3d::Zero(K, 3);

  // LBS: posed_v = sum_k w_vk (R_k (shaped_v - j_k) + t_k)
  for (int k = 0; k < K; ++k) {
    const auto w = model.skin_weights.col(k);
    const Eigen::MatrixX3d wd = w.asDiagonal() * dposed;
    const Eigen::Vector3d s = wd.colwise().sum().transpose();
    dRg[k] += wd.transpose() * cache.shaped -
              s * cache.rest_joints.row(k);
    dtg.row(k) += s.transpose();
    drest.row(k) -= (cache.global_rot[k].transpose() * s).transpose();
    dshaped += wd * cache.global_rot[k];
  }

  // Kinematic chain, children before parents.
  std::vector<Eigen::Matrix3d> dRl(K, Eigen::Matrix3d::Zero());
  for (int k = K - 1; k >= 1; --k) {
    const int p = model.parents[k];
    const Eigen::Vector3d bone =
        (cache.rest_joints.row(k) - cache.rest_joints.row(p)).transpose();
    const Eigen::Vector3d dt = dtg.row(k).transpose();
    dRl[k] = cache.global_rot[p].transpose() * dRg[k];
    dRg[p] += dRg[k] * cache.local_rot[k].transpose() + dt * bone.transpose();
    dtg.row(p) += dtg.row(k);
    const Eigen::Vector3d db = cache.global_rot[p].transpose() * dt;
    drest.row(k) += db.transpose();
    drest.row(p) -= db.transpose();
  }
  dRl[0] = dRg[0];
  drest.row(0) += dtg.row(0);

  if (!extra_dlocal_rot.empty()) {
    for (int k = 0; k < K; ++k) dRl[k] += extra_dlocal_rot[k];
  }

  dshaped += model.joint_regressor.transpose() * drest;

  dpose.setZero(3 * K);
  for (int k = 0; k < K; ++k) {
    const auto dRdw = rodrigues_derivative(params.pose.segment<3>(3 * k));
    for (int i = 0; i < 3; ++i) {
      dpose[3 * k + i] = (dRl[k].array() * dRdw[i].array()).sum();
    }
  }

  dshape.setZero(model.shape_dim);
  for (int b = 0; b < model.shape_dim; ++b) {
    dshape[b] = (model.shape_dirs[b].array() * dshaped.array()).sum();
  }
}

}  // namespace bodyfit
