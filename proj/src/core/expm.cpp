#include "core/expm.hpp"

#include <Eigen/LU>
#include <cmath>

namespace mpk {
namespace {

void pade3(const Matrix& a, Matrix& u, Matrix& v) {
  const double b[] = {120., 60., 12., 1.};
  const Matrix a2 = a * a;
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  u.noalias() = a * (b[3] * a2 + b[1] * id);
  v = b[2] * a2 + b[0] * id;
}

void pade5(const Matrix& a, Matrix& u, Matrix& v) {
  const double b[] = {30240., 15120., 3360., 420., 30., 1.};
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  u.noalias() = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
  v = b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade7(const Matrix& a, Matrix& u, Matrix& v) {
  const double b[] = {17297280., 8648640., 1995840., 277200.,
                      25200.,    1512.,    56.,      1.};
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  u.noalias() = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade9(const Matrix& a, Matrix& u, Matrix& v) {
  const double b[] = {17643225600., 8821612800., 2075673600., 302702400.,
                      30270240.,    2162160.,    110880.,     3960.,
                      90.,          1.};
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix a8 = a6 * a2;
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  u.noalias() = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade13(const Matrix& a, Matrix& u, Matrix& v) {
  const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                      1187353796428800.,  129060195264000.,   10559470521600.,
                      670442572800.,      33522128640.,       1323241920.,
                      40840800.,          960960.,            16380.,
                      182.,               1.};
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  Matrix tmp = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  tmp += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  u.noalias() = a * tmp;
  v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace

Matrix expm(const Matrix& a) {
  // 1-norm thresholds from Higham's degree selection.
  const double theta3 = 1.495585217958292e-2;
  const double theta5 = 2.539398330063230e-1;
  const double theta7 = 9.504178996162932e-1;
  const double theta9 = 2.097847961257068;
  const double theta13 = 5.371920351148152;

  const double l1 = a.cwiseAbs().colwise().sum().maxCoeff();
  Matrix u, v;
  int squarings = 0;
  if (l1 <= theta3) {
    pade3(a, u, v);
  } else if (l1 <= theta5) {
    pade5(a, u, v);
  } else if (l1 <= theta7) {
    pade7(a, u, v);
  } else if (l1 <= theta9) {
    pade9(a, u, v);
  } else {
    double scale = l1 / theta13;
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(scale))));
    Matrix as = a / std::pow(2.0, squarings);
    pade13(as, u, v);
  }

  Matrix num = v + u;
  Matrix den = v - u;
  Matrix r = den.partialPivLu().solve(num);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

}  // namespace mpk
