//! Fixed-precision binary floating point (128-bit mantissa), complex
//! arithmetic on top of it, and Aberth–Ehrlich simultaneous root finding.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactnum::Rational;

/// Working mantissa precision in bits (~38 decimal digits).
pub const PREC: u64 = 128;

/// value = m · 2^e, with |m| kept at most PREC bits by truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct BigFloat {
    m: BigInt,
    e: i64,
}

impl BigFloat {
    pub fn zero() -> BigFloat {
        BigFloat {
            m: BigInt::zero(),
            e: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    fn normalized(mut m: BigInt, mut e: i64) -> BigFloat {
        let bits = m.bits();
        if bits > PREC {
            let shift = bits - PREC;
            m >>= shift;
            e += shift as i64;
        }
        if m.is_zero() {
            e = 0;
        }
        BigFloat { m, e }
    }

    pub fn from_rational(r: &Rational) -> BigFloat {
        if r.is_zero() {
            return BigFloat::zero();
        }
        let num = r.numer().clone();
        let den = r.denom().clone();
        let shift = PREC + den.bits() + 2;
        let q = (num << shift) / den;
        BigFloat::normalized(q, -(shift as i64))
    }

    pub fn from_f64(x: f64) -> BigFloat {
        assert!(x.is_finite());
        if x == 0.0 {
            return BigFloat::zero();
        }
        // scale into a 64-bit integer mantissa
        let (mant, exp) = {
            let bits = x.abs().log2().floor() as i64;
            let scaled = x / 2f64.powi((bits - 60) as i32);
            (scaled as i64, bits - 60)
        };
        BigFloat::normalized(BigInt::from(mant), exp)
    }

    pub fn to_f64(&self) -> f64 {
        if self.m.is_zero() {
            return 0.0;
        }
        let m = self.m.to_f64().unwrap_or(f64::MAX);
        m * 2f64.powi(self.e.clamp(-2000, 2000) as i32)
    }

    /// floor(log2 |x|) + 1, or i64::MIN for zero: a cheap magnitude scale.
    pub fn mag(&self) -> i64 {
        if self.m.is_zero() {
            i64::MIN
        } else {
            self.m.bits() as i64 + self.e
        }
    }

    pub fn add(&self, other: &BigFloat) -> BigFloat {
        if self.m.is_zero() {
            return other.clone();
        }
        if other.m.is_zero() {
            return self.clone();
        }
        let (hi, lo) = if self.e >= other.e {
            (self, other)
        } else {
            (other, self)
        };
        let diff = hi.e - lo.e;
        // beyond the window the smaller operand cannot move the mantissa
        if hi.mag() - lo.mag() > PREC as i64 + 4 {
            return hi.clone();
        }
        let m = (&hi.m << diff as u64) + &lo.m;
        BigFloat::normalized(m, lo.e)
    }

    pub fn sub(&self, other: &BigFloat) -> BigFloat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BigFloat {
        BigFloat {
            m: -&self.m,
            e: self.e,
        }
    }

    pub fn mul(&self, other: &BigFloat) -> BigFloat {
        BigFloat::normalized(&self.m * &other.m, self.e + other.e)
    }

    pub fn div(&self, other: &BigFloat) -> BigFloat {
        assert!(!other.m.is_zero(), "division by zero");
        if self.m.is_zero() {
            return BigFloat::zero();
        }
        let shift = PREC + 2;
        let q = (&self.m << shift) / &other.m;
        BigFloat::normalized(q, self.e - other.e - shift as i64)
    }

    pub fn abs(&self) -> BigFloat {
        BigFloat {
            m: self.m.abs(),
            e: self.e,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Complex {
    pub fn zero() -> Complex {
        Complex {
            re: BigFloat::zero(),
            im: BigFloat::zero(),
        }
    }

    pub fn real(re: BigFloat) -> Complex {
        Complex {
            re,
            im: BigFloat::zero(),
        }
    }

    pub fn from_f64(re: f64, im: f64) -> Complex {
        Complex {
            re: BigFloat::from_f64(re),
            im: BigFloat::from_f64(im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Complex) -> Complex {
        Complex {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        Complex {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        Complex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn div(&self, o: &Complex) -> Complex {
        let n = o.norm_sqr();
        let conj = Complex {
            re: o.re.clone(),
            im: o.im.neg(),
        };
        let num = self.mul(&conj);
        Complex {
            re: num.re.div(&n),
            im: num.im.div(&n),
        }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    /// |z| computed through f64 (adequate for tolerance reporting).
    pub fn abs_f64(&self) -> f64 {
        let n = self.norm_sqr();
        // rescale by a power of 4 so the f64 conversion cannot overflow
        let half = (n.mag() / 2).clamp(-500, 500);
        let scaled = BigFloat {
            m: n.m.clone(),
            e: n.e - 2 * half,
        };
        scaled.to_f64().max(0.0).sqrt() * 2f64.powi(half as i32)
    }

    /// magnitude scale of |z| (floor log2 + O(1))
    pub fn mag(&self) -> i64 {
        self.re.mag().max(self.im.mag()) // within 1 bit of log2|z|
    }

    /// canonical rendering: "re±im·i" with 17 significant digits
    pub fn render(&self) -> String {
        let re = self.re.to_f64();
        let im = self.im.to_f64();
        if im.is_sign_negative() {
            format!("{:.16e}-{:.16e}·i", re, -im)
        } else {
            format!("{:.16e}+{:.16e}·i", re, im)
        }
    }
}

/// Horner evaluation of a real-coefficient polynomial (ascending
/// coefficients) at a complex point.
pub fn eval_poly(coeffs: &[BigFloat], z: &Complex) -> Complex {
    let mut acc = Complex::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(&Complex::real(c.clone()));
    }
    acc
}

pub fn derivative_coeffs(coeffs: &[BigFloat]) -> Vec<BigFloat> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.mul(&BigFloat::from_f64(i as f64)))
        .collect()
}

// plain-f64 complex helpers for the Aberth sweep
fn c_mul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn c_div(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let n = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
}

fn c_abs(a: (f64, f64)) -> f64 {
    a.0.hypot(a.1)
}

fn eval_f64(coeffs: &[f64], z: (f64, f64)) -> (f64, f64) {
    let mut acc = (0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = c_mul(acc, z);
        acc.0 += c;
    }
    acc
}

/// Aberth–Ehrlich simultaneous iteration in f64, then a full-precision
/// Newton polish per root. `coeffs` are ascending with a nonzero leading
/// coefficient; the polynomial should be squarefree. Returns None when the
/// iteration fails to settle.
pub fn aberth_roots(coeffs: &[BigFloat], seed: u64) -> Option<Vec<Complex>> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Some(Vec::new());
    }
    let shadow: Vec<f64> = coeffs.iter().map(|c| c.to_f64()).collect();
    if shadow.iter().any(|c| !c.is_finite()) {
        return None;
    }
    let dshadow: Vec<f64> = shadow
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect();

    // Fujiwara-style seed radius
    let lead = shadow[n].abs();
    let mut radius: f64 = 0.0;
    for (i, c) in shadow[..n].iter().enumerate() {
        radius = radius.max((c.abs() / lead).powf(1.0 / (n - i) as f64));
    }
    let radius = radius.max(0.5) * 1.25;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.25) / n as f64
                + 0.2 * (rng.gen::<f64>() - 0.5);
            let r = radius * (1.0 + 0.1 * (rng.gen::<f64>() - 0.5));
            (r * theta.cos(), r * theta.sin())
        })
        .collect();

    let mut settled = false;
    let mut last_worst = f64::INFINITY;
    for _ in 0..1000 {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let pv = eval_f64(&shadow, z[i]);
            let dv = eval_f64(&dshadow, z[i]);
            if dv == (0.0, 0.0) {
                z[i].0 += 1e-3;
                z[i].1 += 1e-3;
                worst = worst.max(1.0);
                continue;
            }
            let newton = c_div(pv, dv);
            let mut s = (0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != i && z[i] != zj {
                    let inv = c_div((1.0, 0.0), (z[i].0 - zj.0, z[i].1 - zj.1));
                    s.0 += inv.0;
                    s.1 += inv.1;
                }
            }
            let denom = (1.0 - newton.0 * s.0 + newton.1 * s.1, -(newton.0 * s.1 + newton.1 * s.0));
            let w = if denom == (0.0, 0.0) { newton } else { c_div(newton, denom) };
            if !w.0.is_finite() || !w.1.is_finite() {
                continue;
            }
            worst = worst.max(c_abs(w) / c_abs(z[i]).max(1.0));
            z[i].0 -= w.0;
            z[i].1 -= w.1;
        }
        if worst < 1e-13 {
            settled = true;
            break;
        }
        // f64 evaluation noise floors out before 1e-13 at high degree; a
        // stagnated sweep that still reached Newton territory is good
        // enough for the full-precision polish to finish the job
        if worst < 1e-7 && worst >= last_worst * 0.5 {
            settled = true;
            break;
        }
        last_worst = worst;
    }
    if !settled {
        return None;
    }

    // polish at full precision: quadratic convergence from the f64 floor
    // reaches the working-precision floor in a few steps
    let deriv = derivative_coeffs(coeffs);
    let polished: Vec<Complex> = z
        .iter()
        .map(|&(re, im)| {
            let mut zi = Complex::from_f64(re, im);
            for _ in 0..10 {
                let dv = eval_poly(&deriv, &zi);
                if dv.is_zero() {
                    break;
                }
                let step = eval_poly(coeffs, &zi).div(&dv);
                zi = zi.sub(&step);
            }
            zi
        })
        .collect();
    Some(polished)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(x: f64) -> BigFloat {
        BigFloat::from_f64(x)
    }

    #[test]
    fn float_arithmetic() {
        let a = bf(1.5);
        let b = bf(-0.25);
        assert!((a.add(&b).to_f64() - 1.25).abs() < 1e-15);
        assert!((a.mul(&b).to_f64() + 0.375).abs() < 1e-15);
        assert!((a.div(&b).to_f64() + 6.0).abs() < 1e-13);
        let third = BigFloat::from_rational(&Rational::from_big(1.into(), 3.into()));
        let err = third.mul(&bf(3.0)).sub(&bf(1.0)).abs();
        assert!(err.mag() < -(PREC as i64) + 8);
    }

    #[test]
    fn complex_arithmetic() {
        let i = Complex::from_f64(0.0, 1.0);
        let sq = i.mul(&i);
        assert!((sq.re.to_f64() + 1.0).abs() < 1e-15);
        assert!(sq.im.to_f64().abs() < 1e-15);
        let z = Complex::from_f64(3.0, 4.0);
        assert!((z.abs_f64() - 5.0).abs() < 1e-12);
        let q = z.div(&i); // (3+4i)/i = 4 - 3i
        assert!((q.re.to_f64() - 4.0).abs() < 1e-12);
        assert!((q.im.to_f64() + 3.0).abs() < 1e-12);
    }

    #[test]
    fn render_format() {
        let z = Complex::from_f64(0.5, -2.0);
        assert_eq!(z.render(), "5.0000000000000000e-1-2.0000000000000000e0·i");
    }

    #[test]
    fn aberth_quadratic_and_cyclotomic() {
        // z^2 + 1 → ±i
        let coeffs = vec![bf(1.0), bf(0.0), bf(1.0)];
        let mut roots = aberth_roots(&coeffs, 7).unwrap();
        roots.sort_by(|a, b| a.im.to_f64().partial_cmp(&b.im.to_f64()).unwrap());
        assert!((roots[0].im.to_f64() + 1.0).abs() < 1e-25);
        assert!((roots[1].im.to_f64() - 1.0).abs() < 1e-25);
        assert!(roots[0].re.to_f64().abs() < 1e-25);

        // z^5 - 1: all roots on the unit circle
        let mut c5 = vec![bf(-1.0)];
        c5.extend((0..4).map(|_| bf(0.0)));
        c5.push(bf(1.0));
        let roots = aberth_roots(&c5, 7).unwrap();
        assert_eq!(roots.len(), 5);
        for r in &roots {
            assert!((r.abs_f64() - 1.0).abs() < 1e-25);
            let p5 = eval_poly(&c5, r);
            assert!(p5.abs_f64() < 1e-25);
        }
    }
}
