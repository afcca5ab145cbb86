//! Real-argument Bessel functions J0, J1, Y0, Y1 and first-kind Hankel
//! functions of orders zero and one.
//!
//! Three evaluation branches are used: the ascending power series for small
//! arguments, the same series summed in compensated (double-double)
//! arithmetic in the band where alternating-term cancellation exceeds plain
//! f64 accuracy, and the Hankel asymptotic expansion beyond the switchover.
//! Branch agreement at the switchover is covered by unit tests.

use num_complex::Complex64;

use crate::{Error, Result};

/// Euler-Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const FRAC_2_PI: f64 = std::f64::consts::FRAC_2_PI;

/// Plain f64 series is accurate enough below this.
const SERIES_F64_MAX: f64 = 10.5;
/// Switch from (compensated) series to the asymptotic expansion here.
const ASYMPTOTIC_MIN: f64 = 13.0;

/// Bessel function of the first kind, order 0 or 1, for `x >= 0`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    check_order(order)?;
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("bessel_j requires x >= 0, got {x}")));
    }
    let [j0, j1, _, _] = j0j1y0y1_raw(x, false);
    Ok(if order == 0 { j0 } else { j1 })
}

/// Bessel function of the second kind, order 0 or 1, for `x > 0`.
pub fn bessel_y(order: u32, x: f64) -> Result<f64> {
    check_order(order)?;
    if !(x > 0.0) {
        return Err(Error::Domain(format!("bessel_y requires x > 0, got {x}")));
    }
    let [_, _, y0, y1] = j0j1y0y1_raw(x, true);
    Ok(if order == 0 { y0 } else { y1 })
}

/// First-kind Hankel function `H^(1) = J + iY`, order 0 or 1, for `x > 0`.
pub fn hankel1(order: u32, x: f64) -> Result<Complex64> {
    check_order(order)?;
    if !(x > 0.0) {
        return Err(Error::Domain(format!("hankel1 requires x > 0, got {x}")));
    }
    let [j0, j1, y0, y1] = j0j1y0y1_raw(x, true);
    Ok(if order == 0 {
        Complex64::new(j0, y0)
    } else {
        Complex64::new(j1, y1)
    })
}

fn check_order(order: u32) -> Result<()> {
    if order > 1 {
        return Err(Error::InvalidArgument(format!(
            "only orders 0 and 1 are provided, got {order}"
        )));
    }
    Ok(())
}

/// Fused evaluation of `[J0, J1, Y0, Y1]` at `x > 0`, shared by the kernel
/// assembly hot path.
pub(crate) fn j0j1y0y1(x: f64) -> [f64; 4] {
    debug_assert!(x > 0.0);
    j0j1y0y1_raw(x, true)
}

fn j0j1y0y1_raw(x: f64, want_y: bool) -> [f64; 4] {
    if x > ASYMPTOTIC_MIN {
        let (j0, y0) = asymptotic(0, x);
        let (j1, y1) = asymptotic(1, x);
        [j0, j1, y0, y1]
    } else if x > SERIES_F64_MAX {
        series_dd(x)
    } else {
        series_f64(x, want_y)
    }
}

/// Ascending series in plain f64, adequate for x <= 10.5.
fn series_f64(x: f64, want_y: bool) -> [f64; 4] {
    let q = x * x * 0.25;
    // J0/Y0 share t_m = q^m/(m!)^2, J1/Y1 share s_m = q^m/(m!(m+1)!).
    let mut t = 1.0f64;
    let mut s = 1.0f64;
    let mut h = 0.0f64; // harmonic number H_m
    let mut j0 = 1.0;
    let mut y0s = 0.0; // sum_{m>=1} (-1)^{m+1} H_m t_m
    let mut j1s = 1.0; // sum (-1)^m s_m
    let mut y1s = 1.0; // sum (-1)^m (H_m + H_{m+1}) s_m ; m=0 term: H_0 + H_1 = 1
    let mut sign = 1.0f64;
    for m in 1..=80u32 {
        let mf = m as f64;
        t *= q / (mf * mf);
        s *= q / (mf * (mf + 1.0));
        h += 1.0 / mf;
        sign = -sign;
        j0 += sign * t;
        y0s -= sign * h * t;
        j1s += sign * s;
        y1s += sign * (2.0 * h + 1.0 / (mf + 1.0)) * s;
        if t < 1e-18 && s < 1e-18 {
            break;
        }
    }
    let j1 = 0.5 * x * j1s;
    if !want_y {
        return [j0, j1, f64::NAN, f64::NAN];
    }
    if x == 0.0 {
        return [1.0, 0.0, f64::NEG_INFINITY, f64::NEG_INFINITY];
    }
    let lg = (0.5 * x).ln() + EULER_GAMMA;
    let y0 = FRAC_2_PI * (lg * j0 + y0s);
    let y1 = FRAC_2_PI * (lg * j1 - 1.0 / x - 0.25 * x * y1s);
    [j0, j1, y0, y1]
}

/// Ascending series summed in double-double arithmetic for the band where
/// the alternating terms reach ~3e4 and plain f64 loses too many digits.
fn series_dd(x: f64) -> [f64; 4] {
    let q = Dd::two_prod(x, x).scale(0.25);
    let mut t = Dd::from(1.0);
    let mut s = Dd::from(1.0);
    let mut h = Dd::from(0.0);
    let mut j0 = Dd::from(1.0);
    let mut y0s = Dd::from(0.0);
    let mut j1s = Dd::from(1.0);
    let mut y1s = Dd::from(1.0);
    let mut neg = false;
    for m in 1..=90u32 {
        let mf = m as f64;
        t = t.mul(q).div_f64(mf * mf);
        s = s.mul(q).div_f64(mf * (mf + 1.0));
        h = h.add_f64(1.0 / mf);
        neg = !neg;
        let (tt, ss) = if neg { (t.neg(), s.neg()) } else { (t, s) };
        j0 = j0.add(tt);
        y0s = y0s.add(tt.mul(h).neg());
        j1s = j1s.add(ss);
        let hh = h.mul_f64(2.0).add_f64(1.0 / (mf + 1.0));
        y1s = y1s.add(ss.mul(hh));
        if t.hi < 1e-22 {
            break;
        }
    }
    let j0v = j0.to_f64();
    let j1v = 0.5 * x * j1s.to_f64();
    let lg = (0.5 * x).ln() + EULER_GAMMA;
    let y0 = FRAC_2_PI * (lg * j0v + y0s.to_f64());
    let y1 = FRAC_2_PI * (lg * j1v - 1.0 / x - 0.25 * x * y1s.to_f64());
    [j0v, j1v, y0, y1]
}

/// Hankel asymptotic expansion, optimally truncated. For x >= 13 the
/// smallest term is below 3e-12 and the expansion meets the accuracy the
/// quadrature needs.
fn asymptotic(order: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (order * order) as f64;
    let mut p = 0.0f64;
    let mut q = 0.0f64;
    let mut c = 1.0f64; // c_k / x^k
    let mut prev = f64::INFINITY;
    for k in 0..48u32 {
        let mag = c.abs();
        if mag >= prev {
            break;
        }
        prev = mag;
        // signs follow the pattern + + - - + + - -
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * c;
        } else {
            q += sign * c;
        }
        if mag < 1e-19 {
            break;
        }
        let kf = k as f64;
        c *= (mu - (2.0 * kf + 1.0) * (2.0 * kf + 1.0)) / (8.0 * (kf + 1.0) * x);
    }
    let omega = x - (2.0 * order as f64 + 1.0) * std::f64::consts::FRAC_PI_4;
    let (sin_o, cos_o) = omega.sin_cos();
    let amp = (2.0 / (std::f64::consts::PI * x)).sqrt();
    (amp * (p * cos_o - q * sin_o), amp * (p * sin_o + q * cos_o))
}

/// Minimal double-double value used by the compensated series branch.
#[derive(Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        Dd {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    fn quick_two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        Dd { hi: s, lo: b - (s - a) }
    }

    fn two_prod(a: f64, b: f64) -> Self {
        let p = a * b;
        Dd {
            hi: p,
            lo: f64::mul_add(a, b, -p),
        }
    }

    fn add(self, other: Dd) -> Self {
        let s = Dd::two_sum(self.hi, other.hi);
        let e = s.lo + self.lo + other.lo;
        Dd::quick_two_sum(s.hi, e)
    }

    fn add_f64(self, other: f64) -> Self {
        let s = Dd::two_sum(self.hi, other);
        Dd::quick_two_sum(s.hi, s.lo + self.lo)
    }

    fn mul(self, other: Dd) -> Self {
        let p = Dd::two_prod(self.hi, other.hi);
        let e = p.lo + self.hi * other.lo + self.lo * other.hi;
        Dd::quick_two_sum(p.hi, e)
    }

    fn mul_f64(self, other: f64) -> Self {
        let p = Dd::two_prod(self.hi, other);
        Dd::quick_two_sum(p.hi, p.lo + self.lo * other)
    }

    fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let r = self.add(Dd::two_prod(q1, d).neg());
        let q2 = (r.hi + r.lo) / d;
        Dd::quick_two_sum(q1, q2)
    }

    fn scale(self, f: f64) -> Self {
        // exact when f is a power of two
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    fn neg(self) -> Self {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}
