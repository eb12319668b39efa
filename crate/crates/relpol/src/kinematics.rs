//! Four-vectors, Lorentz transforms as ordered factor lists, aberration, and
//! the Wigner rotation angle of the massless little group.
//!
//! Transforms are kept as products of three elementary kinds — a boost along
//! z, a rotation about y, a rotation about z — because the rotation angle
//! picked up by a helicity state has a closed form for each kind. The angle of
//! a product is accumulated factor by factor through the composition law
//! W(Λ'Λ, k) = W(Λ', Λk)·W(Λ, k), never recovered from a 4×4 matrix.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Matrix4, Vector3};

use crate::{Error, Result};

/// Absolute tolerance for the null condition, relative to k_t².
pub const NULL_TOL: f64 = 1e-12;
/// Tolerance for metric preservation mᵀηm = η.
pub const METRIC_TOL: f64 = 1e-10;
/// Transverse extent below which a direction counts as the +z axis.
const AXIS_TOL: f64 = 1e-12;

/// Reduce an angle into the branch (−π, π].
pub fn wrap_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// A contravariant four-vector in the (+,−,−,−) metric, components (t, x, y, z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    /// The standard null momentum k̃ = (1, 0, 0, 1).
    pub const STANDARD: FourVector = FourVector {
        t: 1.0,
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    /// Null momentum of energy `k0` pointing along `dir`.
    pub fn from_direction(k0: f64, dir: UnitDirection) -> Self {
        let n = dir.unit_vector();
        Self::new(k0, k0 * n.x, k0 * n.y, k0 * n.z)
    }

    /// Minkowski square t² − x² − y² − z².
    pub fn minkowski_norm_squared(&self) -> f64 {
        self.t * self.t - self.x * self.x - self.y * self.y - self.z * self.z
    }

    /// Euclidean length of the spatial part.
    pub fn spatial_norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Whether this is a forward (positive-energy) null vector within `NULL_TOL`.
    pub fn is_forward_null(&self) -> bool {
        self.t > 0.0 && self.minkowski_norm_squared().abs() <= NULL_TOL * self.t * self.t
    }

    /// Direction of the spatial part.
    pub fn direction(&self) -> Result<UnitDirection> {
        UnitDirection::from_vector(self.x, self.y, self.z)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(s * self.t, s * self.x, s * self.y, s * self.z)
    }
}

/// A point on the unit sphere: polar angle θ ∈ [0, π] from +z, azimuth
/// φ ∈ [0, 2π). For θ = 0 or θ = π the azimuth is the convention φ = 0
/// when built from a vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitDirection {
    theta: f64,
    phi: f64,
}

impl UnitDirection {
    /// The +z axis.
    pub const Z: UnitDirection = UnitDirection {
        theta: 0.0,
        phi: 0.0,
    };

    /// Build from angles; θ must lie in [0, π] (a 1e−12 excursion is clamped),
    /// φ is reduced modulo 2π.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::PolarAngleOutOfRange(theta));
        }
        let theta = if (-1e-12..0.0).contains(&theta) {
            0.0
        } else if (PI..=PI + 1e-12).contains(&theta) {
            PI
        } else {
            theta
        };
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::PolarAngleOutOfRange(theta));
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(Self { theta, phi })
    }

    /// Direction of a nonzero spatial vector.
    pub fn from_vector(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroSpatialVector);
        }
        let theta = (z / n).clamp(-1.0, 1.0).acos();
        let phi = if x == 0.0 && y == 0.0 {
            0.0
        } else {
            y.atan2(x).rem_euclid(TAU)
        };
        Self::new(theta, phi)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Cartesian unit vector (sinθ cosφ, sinθ sinφ, cosθ).
    pub fn unit_vector(&self) -> Vector3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vector3::new(st * cp, st * sp, ct)
    }

    /// Whether this direction is the +z axis within `AXIS_TOL`.
    pub fn is_plus_z(&self) -> bool {
        self.theta.sin().abs() <= AXIS_TOL && self.theta.cos() > 0.0
    }
}

/// One elementary Lorentz factor. A general transform is an ordered list
/// `[f₁, f₂, …, fₙ]` standing for the matrix product f₁·f₂·…·fₙ, so the
/// *last* factor acts first on a vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Factor {
    /// Boost along +z with velocity v ∈ (−1, 1): a momentum along +z is
    /// red-shifted by √((1−v)/(1+v)).
    BoostZ(f64),
    /// Rotation about the y axis by the given angle (radians).
    RotY(f64),
    /// Rotation about the z axis by the given angle (radians).
    RotZ(f64),
}

impl Factor {
    /// Materialize the 4×4 transform; validates the boost velocity.
    pub fn transform(&self) -> Result<LorentzTransform> {
        match *self {
            Factor::BoostZ(v) => boost_z(v),
            Factor::RotY(a) => Ok(rotation_y(a)),
            Factor::RotZ(a) => Ok(rotation_z(a)),
        }
    }
}

/// Tag recording how a `LorentzTransform` was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    BoostZ,
    RotY,
    RotZ,
    Product,
}

/// A 4×4 real Lorentz matrix with a record of its construction.
///
/// Every constructor yields a matrix satisfying mᵀηm = η to within
/// `METRIC_TOL`; `compose` preserves that bound for the short products used
/// here.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzTransform {
    m: Matrix4<f64>,
    kind: TransformKind,
}

impl LorentzTransform {
    pub fn identity() -> Self {
        Self {
            m: Matrix4::identity(),
            kind: TransformKind::Product,
        }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    /// The spatial 3×3 block. For pure rotations this is the rotation matrix.
    pub fn spatial(&self) -> Matrix3<f64> {
        self.m.fixed_view::<3, 3>(1, 1).into_owned()
    }

    /// Apply to a four-vector.
    pub fn apply(&self, k: &FourVector) -> FourVector {
        let v = nalgebra::Vector4::new(k.t, k.x, k.y, k.z);
        let r = self.m * v;
        FourVector::new(r[0], r[1], r[2], r[3])
    }

    /// Matrix product self·other (other acts first).
    pub fn compose(&self, other: &LorentzTransform) -> LorentzTransform {
        LorentzTransform {
            m: self.m * other.m,
            kind: TransformKind::Product,
        }
    }

    /// Inverse through the metric identity m⁻¹ = η mᵀ η.
    pub fn inverse(&self) -> LorentzTransform {
        let eta = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0));
        LorentzTransform {
            m: eta * self.m.transpose() * eta,
            kind: TransformKind::Product,
        }
    }

    /// Product of an ordered factor list (last factor acts first).
    pub fn from_factors(factors: &[Factor]) -> Result<LorentzTransform> {
        let mut out = Self::identity();
        for f in factors {
            out = out.compose(&f.transform()?);
        }
        Ok(out)
    }

    /// Max deviation of mᵀηm from η.
    pub fn metric_defect(&self) -> f64 {
        let eta = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0));
        (self.m.transpose() * eta * self.m - eta).abs().max()
    }
}

/// Boost along +z with velocity v, as seen from the frame moving with +v:
/// (1,0,0,1) ↦ γ(1−v)·(1,0,0,1).
///
/// Errors with [`Error::SuperluminalVelocity`] unless |v| < 1.
pub fn boost_z(v: f64) -> Result<LorentzTransform> {
    if !(v.abs() < 1.0) {
        return Err(Error::SuperluminalVelocity(v));
    }
    let g = 1.0 / (1.0 - v * v).sqrt();
    #[rustfmt::skip]
    let m = Matrix4::new(
            g, 0.0, 0.0, -g * v,
          0.0, 1.0, 0.0,    0.0,
          0.0, 0.0, 1.0,    0.0,
       -g * v, 0.0, 0.0,      g,
    );
    Ok(LorentzTransform {
        m,
        kind: TransformKind::BoostZ,
    })
}

/// Rotation about y: ẑ ↦ (sin a, 0, cos a).
pub fn rotation_y(a: f64) -> LorentzTransform {
    let (s, c) = a.sin_cos();
    #[rustfmt::skip]
    let m = Matrix4::new(
        1.0, 0.0, 0.0, 0.0,
        0.0,   c, 0.0,   s,
        0.0, 0.0, 1.0, 0.0,
        0.0,  -s, 0.0,   c,
    );
    LorentzTransform {
        m,
        kind: TransformKind::RotY,
    }
}

/// Rotation about z: x̂ ↦ (cos a, sin a, 0).
pub fn rotation_z(a: f64) -> LorentzTransform {
    let (s, c) = a.sin_cos();
    #[rustfmt::skip]
    let m = Matrix4::new(
        1.0, 0.0, 0.0, 0.0,
        0.0,   c,  -s, 0.0,
        0.0,   s,   c, 0.0,
        0.0, 0.0, 0.0, 1.0,
    );
    LorentzTransform {
        m,
        kind: TransformKind::RotZ,
    }
}

/// The standard rotation R(k̂) = R_z(φ)·R_y(θ) carrying ẑ to `dir`.
pub fn standard_rotation(dir: UnitDirection) -> LorentzTransform {
    let mut r = rotation_z(dir.phi()).compose(&rotation_y(dir.theta()));
    r.kind = TransformKind::Product;
    r
}

/// The standard boost L_z(k₀) along z taking k̃ to k₀·k̃, i.e. `boost_z` with
/// velocity (1−k₀²)/(1+k₀²).
pub fn standard_boost(k0: f64) -> Result<LorentzTransform> {
    if !(k0 > 0.0) || !k0.is_finite() {
        return Err(Error::NonNullMomentum {
            norm_sq: f64::NAN,
            energy: k0,
        });
    }
    boost_z((1.0 - k0 * k0) / (1.0 + k0 * k0))
}

/// Aberration of the polar angle under a boost along +z:
/// cosθ′ = (cosθ − v)/(1 − v·cosθ), evaluated in the numerically stable
/// cosine form and returned in [0, π].
pub fn aberrate(theta: f64, v: f64) -> Result<f64> {
    if !(v.abs() < 1.0) {
        return Err(Error::SuperluminalVelocity(v));
    }
    if !theta.is_finite() || !(-1e-12..=PI + 1e-12).contains(&theta) {
        return Err(Error::PolarAngleOutOfRange(theta));
    }
    let c = theta.clamp(0.0, PI).cos();
    let cp = (c - v) / (1.0 - v * c);
    Ok(cp.clamp(-1.0, 1.0).acos())
}

/// Wigner rotation angle of a single elementary factor at momentum direction
/// `dir`, before branch reduction.
fn factor_angle(f: &Factor, dir: UnitDirection) -> Result<f64> {
    Ok(match *f {
        // A boost along z never rotates the transverse plane with the
        // R_z(φ)R_y(θ) standard-rotation convention.
        Factor::BoostZ(v) => {
            if !(v.abs() < 1.0) {
                return Err(Error::SuperluminalVelocity(v));
            }
            0.0
        }
        // Only momenta along +z pick up the full rotation angle; all other
        // directions (including −z, the degenerate-azimuth convention) give 0.
        Factor::RotZ(g) => {
            if dir.is_plus_z() {
                g
            } else {
                0.0
            }
        }
        // Θ = arg(B + iA) with A = sin γ sin φ and
        // B = sin γ cos θ cos φ + cos γ sin θ, where (θ, φ) are the polar
        // angles of the current momentum. This is the unique angle satisfying
        // R(Λk̂)·R_z(Θ)·R(k̂)⁻¹ = R_y(γ); equivalently A² + B² = sin²θ′.
        Factor::RotY(g) => {
            let (sg, cg) = g.sin_cos();
            let a = sg * dir.phi().sin();
            let b = sg * dir.theta().cos() * dir.phi().cos() + cg * dir.theta().sin();
            // arg(0 + 0i) := 0; f64::atan2 already honours this.
            a.atan2(b)
        }
    })
}

/// Wigner rotation angle Θ(Λ, k) for the transform given by `factors`
/// (matrix-product order: the last factor acts first) at the null momentum
/// `k`, reduced into (−π, π].
///
/// The angle is accumulated through the composition law
/// W(Λ′Λ, k) = W(Λ′, Λk)·W(Λ, k): each factor contributes its closed-form
/// angle at the momentum produced by the factors before it. An empty list
/// yields 0. Momenta are renormalized to k_t = 1 after every factor so long
/// lists stay well-scaled.
///
/// Errors with [`Error::NonNullMomentum`] unless `k` is forward null within
/// `NULL_TOL`.
pub fn wigner_angle(factors: &[Factor], k: &FourVector) -> Result<f64> {
    if !k.is_forward_null() {
        return Err(Error::NonNullMomentum {
            norm_sq: k.minkowski_norm_squared(),
            energy: k.t,
        });
    }
    let mut cur = k.scale(1.0 / k.t);
    let mut total = 0.0;
    for f in factors.iter().rev() {
        total += factor_angle(f, cur.direction()?)?;
        cur = f.transform()?.apply(&cur);
        cur = cur.scale(1.0 / cur.t);
    }
    Ok(wrap_angle(total))
}
