//! Jacobi elliptic functions and elliptic integrals of the first kind for a
//! real parameter 0 ≤ m ≤ 1.
//!
//! Both the parameter m and its complement m₁ = 1 − m are threaded through
//! the internal routines: callers that know m₁ from a difference of roots
//! pass it directly instead of forming 1 − m.

use std::f64::consts::{FRAC_PI_2, PI};

const MAX_AGM_STEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

fn agm(b0: f64) -> f64 {
    let (mut a, mut b) = (1.0f64, b0);
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    a
}

/// K(m) from the complement m₁; infinite when m₁ = 0.
pub(crate) fn complete_k_from_complement(m1: f64) -> f64 {
    if m1 <= 0.0 {
        f64::INFINITY
    } else {
        FRAC_PI_2 / agm(m1.sqrt())
    }
}

/// Complete elliptic integral of the first kind K(m) by the
/// arithmetic-geometric mean.
pub fn complete_k(m: f64) -> f64 {
    complete_k_from_complement(1.0 - m)
}

/// sn, cn, dn at `w` assumed already reduced to |w| ≤ K (no range reduction).
pub(crate) fn jacobi_parts(w: f64, m: f64, m1: f64) -> JacobiTriple {
    if m <= 0.0 {
        return JacobiTriple { sn: w.sin(), cn: w.cos(), dn: 1.0 };
    }
    if m1 <= 0.0 {
        let sech = 1.0 / w.cosh();
        return JacobiTriple { sn: w.tanh(), cn: sech, dn: sech };
    }

    // Descending Landen / AGM: keep a_n and c_n, then unwind the amplitude.
    let mut a = [0.0f64; MAX_AGM_STEPS + 1];
    let mut c = [0.0f64; MAX_AGM_STEPS + 1];
    a[0] = 1.0;
    c[0] = m.sqrt();
    let mut b = m1.sqrt();
    let mut n = 0;
    while n < MAX_AGM_STEPS && c[n].abs() > f64::EPSILON * a[n] {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }
    let mut phi = (1u64 << n) as f64 * a[n] * w;
    for k in (1..=n).rev() {
        phi = 0.5 * (phi + (c[k] / a[k] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    let dn = (cn * cn + m1 * sn * sn).sqrt();
    JacobiTriple { sn, cn, dn }
}

/// Reduces `w` to (−K, K] and returns the reduced value and the parity of the
/// number of half-periods 2K removed. sn and cn flip sign under w → w + 2K.
pub(crate) fn reduce_half_period(w: f64, k: f64) -> (f64, bool) {
    if !k.is_finite() {
        return (w, false);
    }
    let j = (w / (2.0 * k)).round();
    let r = w - j * 2.0 * k;
    (r, (j as i64).rem_euclid(2) == 1)
}

pub(crate) fn jacobi_reduced(w: f64, m: f64, m1: f64, k: f64) -> JacobiTriple {
    let (r, odd) = reduce_half_period(w, k);
    let t = jacobi_parts(r, m, m1);
    if odd {
        JacobiTriple { sn: -t.sn, cn: -t.cn, dn: t.dn }
    } else {
        t
    }
}

/// Jacobi elliptic functions sn(u|m), cn(u|m), dn(u|m) for 0 ≤ m ≤ 1.
pub fn jacobi_elliptic(u: f64, m: f64) -> JacobiTriple {
    let m = m.clamp(0.0, 1.0);
    let m1 = 1.0 - m;
    jacobi_reduced(u, m, m1, complete_k_from_complement(m1))
}

/// Carlson's symmetric integral R_F(x, y, z) by duplication.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    const ERRTOL: f64 = 1e-3;
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..200 {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let mean = (x + y + z) / 3.0;
        let (dx, dy, dz) = ((mean - x) / mean, (mean - y) / mean, (mean - z) / mean);
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / mean.sqrt();
        }
    }
    f64::NAN
}

/// F(φ|m) on [−π/2, π/2] given m₁.
fn incomplete_f_principal(phi: f64, m1: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    if m1 <= 0.0 {
        return s.atanh();
    }
    s * carlson_rf(c * c, c * c + m1 * s * s, 1.0)
}

pub(crate) fn incomplete_f_complement(phi: f64, m1: f64, k: f64) -> f64 {
    if m1 <= 0.0 || !k.is_finite() {
        return incomplete_f_principal(phi, m1);
    }
    let j = (phi / PI).round();
    2.0 * j * k + incomplete_f_principal(phi - j * PI, m1)
}

/// Incomplete elliptic integral of the first kind F(φ|m) for any real φ
/// (quasi-periodic continuation F(φ + jπ) = F(φ) + 2jK).
pub fn incomplete_f(phi: f64, m: f64) -> f64 {
    let m1 = 1.0 - m.clamp(0.0, 1.0);
    incomplete_f_complement(phi, m1, complete_k_from_complement(m1))
}
