//! Poincare-disk model of the hyperbolic plane: points, ideal-endpoint
//! geodesics, disk-preserving Mobius isometries, and distance functions.
//!
//! A geodesic is stored by its two ideal endpoint angles plus an orientation
//! flag.  With `flip = false` the positive side is the side to the left when
//! travelling from the `theta1` endpoint towards the `theta2` endpoint; the
//! x-axis diameter from angle pi to angle 0 therefore has the upper half-disk
//! as its positive side and standardizes to the identity map.

use crate::error::{Error, Result};
use num_complex::Complex64;

const TAU: f64 = 2.0 * std::f64::consts::PI;
/// Two ideal endpoints closer than this (in radians) are treated as shared.
const ENDPOINT_TOL: f64 = 1e-9;

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    x: f64,
    y: f64,
}

impl DiskPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x * x + y * y).is_finite() || x * x + y * y >= 1.0 {
            return Err(Error::DomainError { x, y });
        }
        Ok(Self { x, y })
    }

    pub fn origin() -> Self {
        Self { x: 0.0, y: 0.0 }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// Builds a point from a complex value known to lie in the closed disk up
    /// to round-off, nudging it inside if necessary.
    fn from_complex_clamped(z: Complex64) -> Self {
        let n = z.norm();
        if n < 1.0 {
            Self { x: z.re, y: z.im }
        } else {
            let s = (1.0 - 1e-15) / n;
            Self {
                x: z.re * s,
                y: z.im * s,
            }
        }
    }

    /// Euclidean norm squared.
    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }
}

/// Hyperbolic distance in the disk model, d = 2 atanh |(p - q) / (1 - conj(p) q)|.
pub fn hyperbolic_distance(p: DiskPoint, q: DiskPoint) -> f64 {
    let zp = p.to_complex();
    let zq = q.to_complex();
    let num = (zp - zq).norm();
    let den = (Complex64::new(1.0, 0.0) - zp.conj() * zq).norm();
    let ratio = (num / den).min(1.0 - 1e-16);
    2.0 * ratio.atanh()
}

fn angle_normalize(a: f64) -> f64 {
    let mut r = a % TAU;
    if r < 0.0 {
        r += TAU;
    }
    r
}

/// True when `phi` lies in the open counterclockwise arc from `from` to `to`.
fn in_ccw_arc(phi: f64, from: f64, to: f64) -> bool {
    let span = angle_normalize(to - from);
    let off = angle_normalize(phi - from);
    off > 0.0 && off < span
}

fn angular_gap(a: f64, b: f64) -> f64 {
    let d = angle_normalize(a - b);
    d.min(TAU - d)
}

/// Disk-preserving Mobius isometry in SU(1,1) form, z -> (a z + b)/(conj(b) z + conj(a))
/// with |a|^2 - |b|^2 = 1, optionally preceded by complex conjugation
/// (orientation-reversing maps).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusIsometry {
    a: Complex64,
    b: Complex64,
    conjugate: bool,
}

impl MobiusIsometry {
    pub fn identity() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            conjugate: false,
        }
    }

    /// The reflection z -> conj(z).
    pub fn conjugation() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            conjugate: true,
        }
    }

    /// Rotation by `phi` about the origin.
    pub fn rotation(phi: f64) -> Self {
        let h = Complex64::from_polar(1.0, phi / 2.0);
        Self {
            a: h,
            b: Complex64::new(0.0, 0.0),
            conjugate: false,
        }
    }

    /// The map carrying `m` to the origin, z -> (z - m)/(1 - conj(m) z).
    pub fn point_to_origin(m: DiskPoint) -> Self {
        let zm = m.to_complex();
        let s = (1.0 - zm.norm_sqr()).sqrt();
        Self {
            a: Complex64::new(1.0 / s, 0.0),
            b: -zm / s,
            conjugate: false,
        }
    }

    /// Hyperbolic translation along the x-axis carrying the origin to (tanh(s/2), 0).
    pub fn axis_translation(s: f64) -> Self {
        let t = (s / 2.0).tanh();
        let m = DiskPoint::new(-t, 0.0).expect("|tanh| < 1");
        Self::point_to_origin(m)
    }

    fn renormalized(self) -> Self {
        let det = self.a.norm_sqr() - self.b.norm_sqr();
        let s = det.sqrt();
        Self {
            a: self.a / s,
            b: self.b / s,
            conjugate: self.conjugate,
        }
    }

    fn apply_complex(&self, z: Complex64) -> Complex64 {
        let w = if self.conjugate { z.conj() } else { z };
        (self.a * w + self.b) / (self.b.conj() * w + self.a.conj())
    }

    /// Composition self . other (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let (oa, ob) = if self.conjugate {
            (other.a.conj(), other.b.conj())
        } else {
            (other.a, other.b)
        };
        Self {
            a: self.a * oa + self.b * ob.conj(),
            b: self.a * ob + self.b * oa.conj(),
            conjugate: self.conjugate ^ other.conjugate,
        }
        .renormalized()
    }

    pub fn inverse(&self) -> Self {
        if self.conjugate {
            Self {
                a: self.a,
                b: -self.b.conj(),
                conjugate: true,
            }
        } else {
            Self {
                a: self.a.conj(),
                b: -self.b,
                conjugate: false,
            }
        }
    }
}

/// Applies a Mobius isometry to a disk point.
pub fn apply_isometry(m: &MobiusIsometry, p: DiskPoint) -> DiskPoint {
    DiskPoint::from_complex_clamped(m.apply_complex(p.to_complex()))
}

/// Totally geodesic hypersurface of the disk: the circular arc (or diameter)
/// meeting the unit circle orthogonally at two ideal endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    theta1: f64,
    theta2: f64,
    flip: bool,
    standardizer: MobiusIsometry,
}

impl Geodesic {
    pub fn new(theta1: f64, theta2: f64, flip: bool) -> Result<Self> {
        let t1 = angle_normalize(theta1);
        let t2 = angle_normalize(theta2);
        if angular_gap(t1, t2) < ENDPOINT_TOL {
            return Err(Error::DegenerateConfiguration { a: t1, b: t2 });
        }
        let standardizer = build_standardizer(t1, t2, flip);
        Ok(Self {
            theta1: t1,
            theta2: t2,
            flip,
            standardizer,
        })
    }

    pub fn from_degrees(theta1_deg: f64, theta2_deg: f64, flip: bool) -> Result<Self> {
        Self::new(theta1_deg.to_radians(), theta2_deg.to_radians(), flip)
    }

    /// The x-axis diameter with the upper half-disk as positive side.
    pub fn standard() -> Self {
        Self::new(std::f64::consts::PI, 0.0, false).expect("distinct endpoints")
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    pub fn flip(&self) -> bool {
        self.flip
    }

    pub fn endpoints(&self) -> (Complex64, Complex64) {
        (
            Complex64::from_polar(1.0, self.theta1),
            Complex64::from_polar(1.0, self.theta2),
        )
    }

    /// Side of the positive region for a boundary angle not on an endpoint:
    /// +1 on the positive side, -1 on the negative side.
    pub fn side_of_boundary_angle(&self, phi: f64) -> f64 {
        let on_positive = if self.flip {
            in_ccw_arc(phi, self.theta1, self.theta2)
        } else {
            in_ccw_arc(phi, self.theta2, self.theta1)
        };
        if on_positive {
            1.0
        } else {
            -1.0
        }
    }

    /// Whether either ideal endpoint coincides with the given angle.
    pub fn has_endpoint_at(&self, phi: f64, tol: f64) -> bool {
        angular_gap(self.theta1, phi) < tol || angular_gap(self.theta2, phi) < tol
    }
}

/// Builds the isometry carrying the geodesic to the x-axis diameter with its
/// positive side mapped to the upper half-disk.
fn build_standardizer(theta1: f64, theta2: f64, flip: bool) -> MobiusIsometry {
    let u = Complex64::from_polar(1.0, theta1);
    let v = Complex64::from_polar(1.0, theta2);
    let denom = 1.0 + (theta1 - theta2).cos();
    let t1 = if denom < 1e-14 {
        // Diameter: already passes through the origin.
        MobiusIsometry::identity()
    } else {
        let center = (u + v) / denom;
        let radius = (center.norm_sqr() - 1.0).max(0.0).sqrt();
        let m = center / center.norm() * (center.norm() - radius);
        MobiusIsometry::point_to_origin(DiskPoint::from_complex_clamped(m))
    };
    // Rotate so the theta2 endpoint lands on +1; an orientation-preserving
    // map then carries the left-of-travel side to the upper half-disk.
    let v_img = t1.apply_complex(v);
    let t = MobiusIsometry::rotation(-v_img.arg()).compose(&t1);
    if flip {
        MobiusIsometry::conjugation().compose(&t)
    } else {
        t
    }
}

/// Isometry carrying `g` to the x-axis diameter, positive side up.
pub fn standardizing_isometry(g: &Geodesic) -> MobiusIsometry {
    g.standardizer
}

/// Signed hyperbolic distance from `p` to `g`; positive on the positive side.
pub fn signed_distance(p: DiskPoint, g: &Geodesic) -> f64 {
    let w = g.standardizer.apply_complex(p.to_complex());
    let denom = 1.0 - w.norm_sqr();
    (2.0 * w.im / denom).asinh()
}

/// True when the geodesics do not cross: their endpoint pairs do not
/// interleave on the boundary circle.
pub fn geodesics_disjoint(g1: &Geodesic, g2: &Geodesic) -> Result<bool> {
    for a in [g1.theta1, g1.theta2] {
        for b in [g2.theta1, g2.theta2] {
            if angular_gap(a, b) < ENDPOINT_TOL {
                return Err(Error::DegenerateConfiguration { a, b });
            }
        }
    }
    let inside1 = in_ccw_arc(g2.theta1, g1.theta1, g1.theta2);
    let inside2 = in_ccw_arc(g2.theta2, g1.theta1, g1.theta2);
    Ok(inside1 == inside2)
}

/// Distance between two disjoint geodesics via the boundary cross-ratio:
/// with endpoints (a, b) and (c, d), cr = (a-c)(b-d) / ((a-d)(b-c)) equals
/// tanh^2(gap / 2) for one of the two pairings.
pub fn geodesic_gap(g1: &Geodesic, g2: &Geodesic) -> Result<f64> {
    if !geodesics_disjoint(g1, g2)? {
        return Err(Error::IntersectingGeodesics {
            context: format!(
                "endpoints ({:.6}, {:.6}) and ({:.6}, {:.6}) interleave",
                g1.theta1, g1.theta2, g2.theta1, g2.theta2
            ),
        });
    }
    let (a, b) = g1.endpoints();
    let (c, d) = g2.endpoints();
    let cr = ((a - c) * (b - d)) / ((a - d) * (b - c));
    let mut r = cr.re;
    if r > 1.0 {
        r = 1.0 / r;
    }
    let r = r.clamp(0.0, 1.0 - 1e-16);
    Ok(2.0 * r.sqrt().atanh())
}

/// Foot of the perpendicular from `p` onto `g` (the closest point of `g`).
pub fn foot_on_geodesic(p: DiskPoint, g: &Geodesic) -> DiskPoint {
    let w = g.standardizer.apply_complex(p.to_complex());
    let x = w.re;
    let s = 1.0 + w.norm_sqr();
    // Stable root of x u^2 - (1+|w|^2) u + x = 0 with |u| < 1.
    let u = 2.0 * x / (s + (s * s - 4.0 * x * x).max(0.0).sqrt());
    apply_isometry(
        &g.standardizer.inverse(),
        DiskPoint::new(u, 0.0).expect("|u| < 1"),
    )
}

/// Midpoint of the common perpendicular between two disjoint geodesics.
pub fn common_perpendicular_midpoint(g1: &Geodesic, g2: &Geodesic) -> Result<DiskPoint> {
    let gap = geodesic_gap(g1, g2)?;
    let std1 = g1.standardizer;
    // Endpoints of g2 in standardized coordinates; both lie in one half-circle.
    let (c, d) = g2.endpoints();
    let ci = std1.apply_complex(c);
    let di = std1.apply_complex(d);
    let denom = 1.0 + (ci.arg() - di.arg()).cos();
    let center = (ci + di) / denom;
    // Perpendicular to the real diameter crosses it at u = c_re/(1 + sqrt(1 - c_re^2)).
    let cre = center.re.clamp(-1.0, 1.0);
    let u = cre / (1.0 + (1.0 - cre * cre).max(0.0).sqrt());
    let to_axis = MobiusIsometry::point_to_origin(DiskPoint::new(u, 0.0)?);
    // Walk half the gap along the perpendicular (the imaginary axis after
    // translating u to the origin), towards the side containing g2.
    let side = if center.im >= 0.0 { 1.0 } else { -1.0 };
    let q = Complex64::new(0.0, side * (gap / 4.0).tanh());
    let back = std1.inverse().compose(&to_axis.inverse());
    Ok(apply_isometry(&back, DiskPoint::from_complex_clamped(q)))
}
