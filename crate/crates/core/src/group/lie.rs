use std::f64::consts::PI;
use std::ops::Mul;

/// Unit quaternion `w + x i + y j + z k` standing for the SU(2) element
/// `w·I − i(x σ_x + y σ_y + z σ_z)`, i.e. the rotation `exp(−iθ n·J)` with
/// `w = cos(θ/2)` and `(x, y, z) = sin(θ/2)·n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Quaternion::new(self.w / n, self.x / n, self.y / n, self.z / n)
    }

    pub fn conjugate(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Rotation by `angle` about the unit `axis`.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        Quaternion::new(c, s * axis[0] / n, s * axis[1] / n, s * axis[2] / n)
    }

    /// `R_z(α) R_y(β) R_z(γ)`.
    pub fn from_euler_zyz(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self::from_axis_angle([0.0, 0.0, 1.0], alpha)
            * Self::from_axis_angle([0.0, 1.0, 0.0], beta)
            * Self::from_axis_angle([0.0, 0.0, 1.0], gamma)
    }

    /// Rotation angle in `[0, 2π]` and unit axis (`z` when the angle is 0).
    pub fn axis_angle(&self) -> ([f64; 3], f64) {
        let v = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        let angle = 2.0 * v.atan2(self.w);
        if v < 1e-300 {
            ([0.0, 0.0, 1.0], angle)
        } else {
            ([self.x / v, self.y / v, self.z / v], angle)
        }
    }

    pub fn distance(&self, other: &Quaternion) -> f64 {
        Quaternion::new(
            self.w - other.w,
            self.x - other.x,
            self.y - other.y,
            self.z - other.z,
        )
        .norm()
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Euler-angle product rule on SU(2), exact for every product of two Wigner
/// matrix elements of spins `j, j' ≤ max_two_j / 2`.
///
/// `α, γ` range over `[0, 4π)` with `2·max_two_j + 1` equispaced nodes each
/// (a uniform double cover); `cos β` uses `max_two_j + 1` Gauss–Legendre
/// points. Weights sum to 1.
pub fn su2_quadrature(max_two_j: u32) -> Vec<(Quaternion, f64)> {
    let m = max_two_j as usize;
    let na = 2 * m + 1;
    let gl = gauss_legendre(m + 1);
    let mut nodes = Vec::with_capacity(na * na * gl.len());
    for a in 0..na {
        let alpha = 4.0 * PI * a as f64 / na as f64;
        for &(x, w) in &gl {
            let beta = x.clamp(-1.0, 1.0).acos();
            for g in 0..na {
                let gamma = 4.0 * PI * g as f64 / na as f64;
                let q = Quaternion::from_euler_zyz(alpha, beta, gamma);
                nodes.push((q, w / 2.0 / (na * na) as f64));
            }
        }
    }
    nodes
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Fixed low-discrepancy SU(2) point set: Halton points in bases 2, 3, 5
/// mapped to unit quaternions with Shoemake's uniform construction.
pub fn su2_low_discrepancy(count: usize) -> Vec<Quaternion> {
    (1..=count as u64)
        .map(|i| {
            let (u1, u2, u3) = (
                radical_inverse(i, 2),
                radical_inverse(i, 3),
                radical_inverse(i, 5),
            );
            let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
            Quaternion::new(
                a * (2.0 * PI * u2).sin(),
                a * (2.0 * PI * u2).cos(),
                b * (2.0 * PI * u3).sin(),
                b * (2.0 * PI * u3).cos(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre(4);
        let wsum: f64 = rule.iter().map(|p| p.1).sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        // ∫ x^6 = 2/7, exact for 4 points (degree ≤ 7)
        let i6: f64 = rule.iter().map(|(x, w)| w * x.powi(6)).sum();
        assert!((i6 - 2.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn quaternion_inverse() {
        let q = Quaternion::new(0.3, -0.2, 0.9, 0.1).normalized();
        assert!((q * q.conjugate()).distance(&Quaternion::IDENTITY) < 1e-15);
    }

    #[test]
    fn quadrature_weights_sum_to_one() {
        for m in 0..4 {
            let s: f64 = su2_quadrature(m).iter().map(|n| n.1).sum();
            assert!((s - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn low_discrepancy_points_are_unit() {
        for q in su2_low_discrepancy(64) {
            assert!((q.norm() - 1.0).abs() < 1e-12);
        }
    }
}
