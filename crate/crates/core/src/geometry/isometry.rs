use super::{minkowski, Point};
use crate::radial::SpaceForm;

/// Orientation-preserving isometry of the plane or of ℍ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Isometry {
    /// `x ↦ R(angle)·x + translation`
    Euclidean { angle: f64, translation: [f64; 2] },
    /// Orthochronous Lorentz transformation acting on hyperboloid coordinates.
    Lorentz { matrix: [[f64; 3]; 3] },
}

impl Isometry {
    pub fn identity(space: SpaceForm) -> Self {
        match space {
            SpaceForm::Flat => Isometry::Euclidean {
                angle: 0.0,
                translation: [0.0, 0.0],
            },
            SpaceForm::Hyperbolic => Isometry::Lorentz {
                matrix: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            },
        }
    }

    pub fn euclidean(angle: f64, translation: [f64; 2]) -> Self {
        Isometry::Euclidean { angle, translation }
    }

    /// Rotation of ℍ² about the pole.
    pub fn hyperbolic_rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Isometry::Lorentz {
            matrix: [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]],
        }
    }

    /// Boost moving the pole a distance `rapidity` in the direction `angle`.
    pub fn hyperbolic_boost(rapidity: f64, angle: f64) -> Self {
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        let (s, c) = angle.sin_cos();
        let boost_x = [[ch, sh, 0.0], [sh, ch, 0.0], [0.0, 0.0, 1.0]];
        let rot = [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]];
        let rot_inv = [[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]];
        Isometry::Lorentz {
            matrix: mat_mul(&mat_mul(&rot, &boost_x), &rot_inv),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        match (self, other) {
            (
                Isometry::Euclidean { angle: a, translation: t },
                Isometry::Euclidean { angle: b, translation: u },
            ) => {
                let (s, c) = a.sin_cos();
                Isometry::Euclidean {
                    angle: a + b,
                    translation: [c * u[0] - s * u[1] + t[0], s * u[0] + c * u[1] + t[1]],
                }
            }
            (Isometry::Lorentz { matrix: m }, Isometry::Lorentz { matrix: n }) => {
                Isometry::Lorentz { matrix: mat_mul(m, n) }
            }
            _ => panic!("cannot compose isometries of different space forms"),
        }
    }

    pub fn space(&self) -> SpaceForm {
        match self {
            Isometry::Euclidean { .. } => SpaceForm::Flat,
            Isometry::Lorentz { .. } => SpaceForm::Hyperbolic,
        }
    }

    pub fn apply(&self, p: &Point) -> Point {
        match self {
            Isometry::Euclidean { angle, translation } => {
                let (s, c) = angle.sin_cos();
                let [x, y] = p.coords();
                Point::new(
                    SpaceForm::Flat,
                    c * x - s * y + translation[0],
                    s * x + c * y + translation[1],
                )
            }
            Isometry::Lorentz { matrix } => {
                let a = mat_vec(matrix, p.ambient());
                Point::new(SpaceForm::Hyperbolic, a[1], a[2])
            }
        }
    }

    /// Angle by which the differential at `p` rotates the frame at `p`
    /// relative to the frame at the image point.
    pub fn frame_rotation_at(&self, p: &Point) -> f64 {
        match self {
            Isometry::Euclidean { angle, .. } => *angle,
            Isometry::Lorentz { matrix } => {
                let image = self.apply(p);
                let [e1, _] = p.frame();
                let moved = mat_vec(matrix, e1);
                let [f1, f2] = image.frame();
                minkowski(moved, f2).atan2(minkowski(moved, f1))
            }
        }
    }
}

fn mat_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn mat_vec(a: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
        a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
        a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
    ]
}
