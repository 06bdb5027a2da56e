//! Certified Mahler measure.
//!
//! Roots of each square-free factor are seeded by Aberth iteration in
//! floating point, refined by Weierstrass (Durand-Kerner) steps on dyadic
//! complex rationals, and certified with the inclusion disks
//! `|z - z_i| <= d |W_i|`: when these are pairwise disjoint each one holds
//! exactly one root.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};

use super::IntegerPolynomial;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::poly::Poly;

type QComplex = Complex<BigRational>;

/// Simultaneous approximation of all roots of `sum c_k x^k` by Aberth
/// iteration. Works for any float type; the result is uncertified.
pub fn aberth_roots<F: Float>(coeffs: &[F], max_iter: usize) -> Vec<Complex<F>> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let c: Vec<F> = coeffs.iter().map(|&x| x / lead).collect();
    let radius = F::one() + c[..d].iter().fold(F::zero(), |m, x| m.max(x.abs()));
    let two_pi = F::from(std::f64::consts::TAU).unwrap();
    let mut z: Vec<Complex<F>> = (0..d)
        .map(|k| {
            let theta = two_pi * F::from(k).unwrap() / F::from(d).unwrap() + F::from(0.4).unwrap();
            Complex::from_polar(radius * F::from(0.5).unwrap(), theta)
        })
        .collect();
    let eps = F::epsilon() * F::from(4).unwrap();
    for _ in 0..max_iter {
        let mut moved = F::zero();
        for i in 0..d {
            let (p, dp) = c.iter().rev().fold(
                (Complex::new(F::zero(), F::zero()), Complex::new(F::zero(), F::zero())),
                |(p, dp), &a| (p * z[i] + a, dp * z[i] + p),
            );
            if p.norm() == F::zero() {
                continue;
            }
            let ratio = p / dp;
            let repulsion = (0..d)
                .filter(|&j| j != i)
                .fold(Complex::new(F::zero(), F::zero()), |s, j| s + (z[i] - z[j]).inv());
            let step = ratio / (Complex::new(F::one(), F::zero()) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] = z[i] - step;
                moved = moved.max(step.norm() / z[i].norm().max(F::one()));
            }
        }
        if moved <= eps {
            break;
        }
    }
    z
}

/// One certified root.
#[derive(Clone, Debug)]
pub struct RootEnclosure {
    /// Dyadic center.
    pub center: QComplex,
    /// Upper bound on the distance from the center to the root.
    pub radius: BigRational,
    /// Enclosure of `|alpha|`.
    pub modulus: Interval,
    pub multiplicity: usize,
    /// `|alpha|` could not be separated from 1 by more than `2^-precision`.
    pub near_unit: bool,
}

impl RootEnclosure {
    pub fn center_f64(&self) -> (f64, f64) {
        (
            self.center.re.to_f64().unwrap_or(f64::NAN),
            self.center.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

#[derive(Clone, Debug)]
pub struct MahlerResult {
    /// Enclosure of `m(f) = sum max(log |alpha_i|, 0)`.
    pub measure: Interval,
    /// One entry per distinct root; multiplicities sum to the degree.
    pub roots: Vec<RootEnclosure>,
    pub precision_bits: u32,
}

impl MahlerResult {
    pub fn near_unit_roots(&self) -> usize {
        self.roots.iter().filter(|r| r.near_unit).map(|r| r.multiplicity).sum()
    }

    /// Lower bound on `min |log |alpha||` over the roots, or `None` when some
    /// root is near the unit circle.
    pub fn unit_margin(&self) -> Option<f64> {
        let mut margin = f64::INFINITY;
        for r in &self.roots {
            if r.near_unit {
                return None;
            }
            let m = if r.modulus.lo_f64() > 1.0 {
                r.modulus.lo_f64().ln()
            } else {
                -r.modulus.hi_f64().ln()
            };
            margin = margin.min(m);
        }
        // Absorb the f64 rounding of ln.
        Some(margin * (1.0 - 1e-12))
    }
}

/// Mahler measure with every root classified as inside, outside, or within
/// `2^-precision_bits` of the unit circle.
pub fn mahler_measure(f: &IntegerPolynomial, precision_bits: u32) -> Result<MahlerResult> {
    let prec = precision_bits.max(16);
    let mut measure = Interval::zero(prec + 16);
    let mut roots = Vec::new();
    for (mult, g) in f.as_poly().to_rational().squarefree_decomposition() {
        for mut r in certify_roots(&g, prec)? {
            r.multiplicity = mult;
            let contribution = log_plus(&r.modulus, prec + 16)?;
            measure = measure.add(&contribution.mul_int(&BigInt::from(mult)));
            roots.push(r);
        }
    }
    Ok(MahlerResult {
        measure: measure.with_prec(prec),
        roots,
        precision_bits: prec,
    })
}

/// `max(log x, 0)` over an enclosure of `x >= 0`.
fn log_plus(x: &Interval, prec: u32) -> Result<Interval> {
    let one = BigRational::one();
    if x.hi() <= one {
        return Ok(Interval::zero(prec));
    }
    let hi = Interval::ln_rational(&x.hi(), prec);
    if x.lo() >= one {
        let lo = Interval::ln_rational(&x.lo(), prec);
        Ok(lo.hull(&hi))
    } else {
        Ok(Interval::zero(prec).hull(&hi))
    }
}

fn round_dyadic(x: &BigRational, w: u32) -> BigRational {
    let scale = BigRational::from_integer(BigInt::one() << w);
    BigRational::new((x * &scale).round().to_integer(), BigInt::one() << w)
}

fn round_complex(z: &QComplex, w: u32) -> QComplex {
    Complex::new(round_dyadic(&z.re, w), round_dyadic(&z.im, w))
}

/// `[floor, ceil]` of `sqrt(x) * 2^s`, as rationals over `2^s`.
fn sqrt_bounds(x: &BigRational, s: u32) -> (BigRational, BigRational) {
    let scaled = x * BigRational::from_integer(BigInt::one() << (2 * s));
    let lo_int = scaled.floor().to_integer().magnitude().sqrt();
    let ceil_arg: BigUint = scaled.ceil().to_integer().magnitude().clone();
    let mut hi_int = ceil_arg.sqrt();
    if &hi_int * &hi_int < ceil_arg {
        hi_int += 1u32;
    }
    let den = BigInt::one() << s;
    (
        BigRational::new(BigInt::from(lo_int), den.clone()),
        BigRational::new(BigInt::from(hi_int), den),
    )
}

fn eval_complex(g: &Poly<BigRational>, z: &QComplex) -> QComplex {
    g.coeffs()
        .iter()
        .rev()
        .fold(Complex::new(BigRational::zero(), BigRational::zero()), |acc, c| {
            acc * z.clone() + Complex::new(c.clone(), BigRational::zero())
        })
}

/// Weierstrass corrections `W_i = g(z_i) / prod_{j != i} (z_i - z_j)` for
/// monic `g`.
fn weierstrass(g: &Poly<BigRational>, z: &[QComplex]) -> Option<Vec<QComplex>> {
    let one = Complex::new(BigRational::one(), BigRational::zero());
    z.iter()
        .enumerate()
        .map(|(i, zi)| {
            let denom = z
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(one.clone(), |acc, (_, zj)| acc * (zi - zj));
            if denom.re.is_zero() && denom.im.is_zero() {
                return None;
            }
            Some(eval_complex(g, zi) / denom)
        })
        .collect()
}

const MAX_REFINEMENTS: usize = 200;

/// Isolates the roots of a monic square-free rational polynomial.
fn certify_roots(g: &Poly<BigRational>, prec: u32) -> Result<Vec<RootEnclosure>> {
    let d = g.degree().unwrap();
    let approx: Vec<f64> = g.coeffs().iter().map(|c| c.to_f64().unwrap_or(0.0)).collect();
    let seeds = aberth_roots(&approx, 500);
    let mut w = prec + 64;
    let mut z: Vec<QComplex> = seeds
        .iter()
        .map(|s| {
            Complex::new(
                BigRational::from_float(s.re).unwrap_or_else(BigRational::zero),
                BigRational::from_float(s.im).unwrap_or_else(BigRational::zero),
            )
        })
        .map(|c| round_complex(&c, w))
        .collect();
    let target = BigRational::new(BigInt::one(), BigInt::one() << (prec + 8));
    let d_sq = BigRational::from_integer(BigInt::from(d * d));
    let mut stalled = 0;
    let mut last_max = None::<BigRational>;
    for iteration in 0..MAX_REFINEMENTS {
        let Some(corr) = weierstrass(g, &z) else {
            // Coincident centers: nudge one apart and retry.
            let bump = BigRational::new(BigInt::one(), BigInt::one() << (w / 2));
            for (k, zi) in z.iter_mut().enumerate() {
                zi.im += &bump * BigRational::from_integer(BigInt::from(k as i64 + 1));
            }
            continue;
        };
        let radii: Vec<BigRational> = corr
            .iter()
            .map(|c| sqrt_bounds(&(&d_sq * c.norm_sqr()), w + 16).1)
            .collect();
        let max_r = radii.iter().max().cloned().unwrap_or_else(BigRational::zero);
        if max_r <= target && disjoint(&z, &radii) {
            if let Some(out) = classify(&z, &radii, prec, w) {
                return Ok(out);
            }
        }
        if last_max.as_ref().is_some_and(|m| &max_r * BigRational::from_integer(4.into()) > *m) {
            stalled += 1;
            if stalled >= 3 {
                // Rounding noise at 2^-w dominates: raise the working precision.
                w *= 2;
                stalled = 0;
            }
        }
        last_max = Some(max_r);
        z = z
            .iter()
            .zip(&corr)
            .map(|(zi, c)| round_complex(&(zi - c), w))
            .collect();
        if iteration + 1 == MAX_REFINEMENTS {
            break;
        }
    }
    let partial = weierstrass(g, &z)
        .map(|corr| {
            z.iter()
                .zip(corr)
                .map(|(zi, c)| {
                    (
                        zi.re.to_f64().unwrap_or(f64::NAN),
                        zi.im.to_f64().unwrap_or(f64::NAN),
                        (c.norm_sqr().to_f64().unwrap_or(f64::INFINITY)).sqrt() * d as f64,
                    )
                })
                .collect()
        })
        .unwrap_or_default();
    Err(Error::NonConvergence {
        iterations: MAX_REFINEMENTS,
        partial,
    })
}

fn disjoint(z: &[QComplex], radii: &[BigRational]) -> bool {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let gap = (&z[i] - &z[j]).norm_sqr();
            let reach = &radii[i] + &radii[j];
            if gap <= &reach * &reach {
                return false;
            }
        }
    }
    true
}

/// Moduli enclosures; `None` if some root is neither decided nor within
/// `2^-prec` of the unit circle.
fn classify(z: &[QComplex], radii: &[BigRational], prec: u32, w: u32) -> Option<Vec<RootEnclosure>> {
    let one = BigRational::one();
    let tol = BigRational::new(BigInt::one(), BigInt::one() << prec);
    let iv_prec = prec + 16;
    let mut out = Vec::with_capacity(z.len());
    for (zi, r) in z.iter().zip(radii) {
        let (abs_lo, abs_hi) = sqrt_bounds(&zi.norm_sqr(), w + 16);
        let lo = (abs_lo - r).max(BigRational::zero());
        let hi = abs_hi + r;
        let decided = lo > one || hi < one;
        let near = !decided && lo >= &one - &tol && hi <= &one + &tol;
        if !decided && !near {
            return None;
        }
        let modulus = Interval::from_rational(&lo, iv_prec).hull(&Interval::from_rational(&hi, iv_prec));
        out.push(RootEnclosure {
            center: zi.clone(),
            radius: r.clone(),
            modulus,
            multiplicity: 1,
            near_unit: near,
        });
    }
    Some(out)
}
