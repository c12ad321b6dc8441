#pragma once

namespace layerlab {

// Displacements in length units, stresses in stress units, at scaled (R, Z).
struct FieldSample {
  double R = 0.0, Z = 0.0;
  double u_r = 0.0, u_z = 0.0;
  double s_rr = 0.0, s_tt = 0.0, s_zz = 0.0, s_rz = 0.0;
};

}  // namespace layerlab
