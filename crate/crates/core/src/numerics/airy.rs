//! Airy function of the first kind on the real line.
//!
//! Evaluation switches between the Maclaurin series near the origin and the
//! large-argument asymptotic expansions. The switch points, `-7` on the
//! oscillatory side and `+6` on the decaying side, are where both branches
//! agree to better than `1e-11` in absolute terms; this keeps the absolute
//! error below `1e-10` over the whole window `|z| <= 50`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest `|z|` accepted by [`airy_ai`] and [`airy_ai_prime`].
pub const AIRY_WINDOW: f64 = 50.0;

const AI0: f64 = 0.355_028_053_887_817_239_26;
const AIP0: f64 = -0.258_819_403_792_806_798_41;

const SERIES_LOWER: f64 = -7.0;
const SERIES_UPPER: f64 = 6.0;

/// `Ai(z)`.
pub fn airy_ai(z: f64) -> Result<f64> {
    airy_pair(z).map(|(ai, _)| ai)
}

/// `Ai'(z)`.
pub fn airy_ai_prime(z: f64) -> Result<f64> {
    airy_pair(z).map(|(_, aip)| aip)
}

/// `(Ai(z), Ai'(z))` evaluated together.
pub fn airy_pair(z: f64) -> Result<(f64, f64)> {
    if !z.is_finite() || z.abs() > AIRY_WINDOW {
        return Err(Error::AiryDomain { z, limit: AIRY_WINDOW });
    }
    Ok(if z > SERIES_UPPER {
        asymptotic_decaying(z)
    } else if z < SERIES_LOWER {
        asymptotic_oscillatory(-z)
    } else {
        maclaurin(z)
    })
}

fn maclaurin(z: f64) -> (f64, f64) {
    let z3 = z * z * z;
    // f = sum 3^k (1/3)_k z^{3k} / (3k)!, g = sum 3^k (2/3)_k z^{3k+1} / (3k+1)!
    let (mut f, mut tf) = (1.0, 1.0);
    let (mut g, mut tg) = (z, z);
    let (mut fp, mut tfp) = (0.0, 0.5 * z * z);
    let (mut gp, mut tgp) = (1.0, 1.0);
    fp += tfp;
    for k in 1..200 {
        let kf = k as f64;
        tf *= z3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        tg *= z3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        tgp *= z3 / ((3.0 * kf) * (3.0 * kf - 2.0));
        if k >= 2 {
            tfp *= z3 / (3.0 * (3.0 * kf - 1.0) * (kf - 1.0));
            fp += tfp;
        }
        f += tf;
        g += tg;
        gp += tgp;
        let small = |t: f64, s: f64| t.abs() <= 1e-17 * s.abs().max(1e-300);
        if small(tf, f) && small(tg, g) && small(tfp, fp) && small(tgp, gp) {
            break;
        }
    }
    (AI0 * f + AIP0 * g, AI0 * fp + AIP0 * gp)
}

/// Coefficients `u_k` and `v_k` of the asymptotic expansions.
fn asymptotic_coefficients() -> ([f64; 40], [f64; 40]) {
    let mut u = [0.0; 40];
    let mut v = [0.0; 40];
    u[0] = 1.0;
    v[0] = 1.0;
    for k in 1..40 {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        v[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k];
    }
    (u, v)
}

/// Sums `sum_k (-1)^k c_k / zeta^k`, stopping at the smallest term.
fn alternating_sum(c: &[f64], zeta: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0;
    let mut previous = f64::INFINITY;
    for (k, ck) in c.iter().enumerate() {
        let term = ck / power;
        if term.abs() > previous {
            break;
        }
        sum += if k % 2 == 0 { term } else { -term };
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        previous = term.abs();
        power *= zeta;
    }
    sum
}

fn asymptotic_decaying(z: f64) -> (f64, f64) {
    let (u, v) = asymptotic_coefficients();
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let q = z.powf(0.25);
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    (e / q * alternating_sum(&u, zeta), -e * q * alternating_sum(&v, zeta))
}

fn asymptotic_oscillatory(x: f64) -> (f64, f64) {
    let (u, v) = asymptotic_coefficients();
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let q = x.powf(0.25);
    // Even and odd parts of the series, each alternating in sign.
    let split = |c: &[f64; 40]| {
        let mut even = 0.0;
        let mut odd = 0.0;
        let mut previous = f64::INFINITY;
        let mut power = 1.0;
        for k in 0..19 {
            let a = c[2 * k].abs() / power;
            let b = c[2 * k + 1].abs() / (power * zeta);
            if a.max(b) > previous {
                break;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            even += sign * c[2 * k] / power;
            odd += sign * c[2 * k + 1] / (power * zeta);
            previous = a.max(b);
            power *= zeta * zeta;
        }
        (even, odd)
    };
    let theta = zeta - PI / 4.0;
    let (s, c) = theta.sin_cos();
    let (pu, qu) = split(&u);
    let (pv, qv) = split(&v);
    let ai = (c * pu + s * qu) / (PI.sqrt() * q);
    let aip = q / PI.sqrt() * (s * pv - c * qv);
    (ai, aip)
}

/// The first `n_max` zeros of `Ai`, ordered `R_1 > R_2 > ...` (all negative).
pub fn airy_roots(n_max: usize) -> Result<Vec<f64>> {
    if !(1..=50).contains(&n_max) {
        return Err(crate::error::invalid(
            "n_max",
            format!("must lie in 1..=50, got {n_max}"),
        ));
    }
    (1..=n_max).map(airy_root).collect()
}

fn airy_root(n: usize) -> Result<f64> {
    let t = 3.0 * PI * (4.0 * n as f64 - 1.0) / 8.0;
    let seed = -t.powf(2.0 / 3.0);
    let half_width = 0.3 * PI / seed.abs().sqrt();
    let (mut lo, mut hi) = (seed - half_width, seed + half_width);
    let (mut f_lo, f_hi) = (airy_ai(lo)?, airy_ai(hi)?);
    if f_lo * f_hi > 0.0 {
        return Err(Error::RootBracket(n));
    }
    let mut x = seed;
    for _ in 0..100 {
        let (f, fp) = airy_pair(x)?;
        if f == 0.0 {
            return Ok(x);
        }
        if f * f_lo < 0.0 {
            hi = x;
        } else {
            lo = x;
            f_lo = f;
        }
        let newton = x - f / fp;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs() {
            x = next;
            break;
        }
        x = next;
    }
    if airy_ai(x)?.abs() >= 1e-10 {
        return Err(Error::RootBracket(n));
    }
    Ok(x)
}
